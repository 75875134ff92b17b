#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phasesync {

/// Violated precondition on an argument (bad band, mismatched lengths, ...).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file. Row is the 1-based data row (header excluded), 0 when
/// the problem is not tied to a row.
class IngestError : public std::runtime_error {
public:
    IngestError(const std::string& what, std::size_t row = 0, std::string column = {})
        : std::runtime_error(what), row_(row), column_(std::move(column)) {}

    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] const std::string& column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

/// The analytic signal passes too close to the origin for its phase to be
/// meaningful.
class DegeneratePhaseError : public std::runtime_error {
public:
    DegeneratePhaseError(const std::string& what, std::size_t index)
        : std::runtime_error(what), index_(index) {}

    [[nodiscard]] std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace phasesync

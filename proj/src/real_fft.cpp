#include "real_fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace phasesync::detail {

namespace {

// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> allocate(std::size_t count) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(count, 1)));
    if (p == nullptr) throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

class Plan {
public:
    explicit Plan(fftw_plan plan) : plan_(plan) {
        if (plan_ == nullptr) throw std::runtime_error("FFTW failed to create a plan");
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

}  // namespace

std::vector<std::complex<double>> forward_real(std::span<const double> x) {
    const auto n = x.size();
    const auto bins = n / 2 + 1;
    auto in = allocate<double>(n);
    auto out = allocate<fftw_complex>(bins);

    std::unique_ptr<Plan> plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = std::make_unique<Plan>(
            fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    }
    std::copy(x.begin(), x.end(), in.get());
    plan->execute();

    std::vector<std::complex<double>> spectrum(bins);
    for (std::size_t k = 0; k < bins; ++k) spectrum[k] = {out[k][0], out[k][1]};
    return spectrum;
}

std::vector<double> inverse_real(std::span<const std::complex<double>> spectrum, std::size_t n) {
    const auto bins = n / 2 + 1;
    if (spectrum.size() != bins) throw std::invalid_argument("spectrum size does not match n");
    auto in = allocate<fftw_complex>(bins);
    auto out = allocate<double>(n);

    std::unique_ptr<Plan> plan;
    {
        std::lock_guard lock(planner_mutex());
        // c2r destroys its input; FFTW_ESTIMATE leaves the arrays untouched while planning.
        plan = std::make_unique<Plan>(
            fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    }
    for (std::size_t k = 0; k < bins; ++k) {
        in[k][0] = spectrum[k].real();
        in[k][1] = spectrum[k].imag();
    }
    plan->execute();

    const double scale = 1.0 / static_cast<double>(n);
    std::vector<double> result(out.get(), out.get() + n);
    for (auto& v : result) v *= scale;
    return result;
}

}  // namespace phasesync::detail

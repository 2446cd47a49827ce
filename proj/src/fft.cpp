#include "fracns/fft.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fracns::fft {
namespace {

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int n, Direction dir) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, dir == Direction::Forward);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        if (!threads_initialised_) {
            fftw_init_threads();
            fftw_plan_with_nthreads(worker_count());
            threads_initialised_ = true;
        }
        const std::size_t count = static_cast<std::size_t>(n) * n * n;
        std::vector<std::complex<double>> a(count), b(count);
        fftw_plan plan = fftw_plan_dft_3d(
            n, n, n, reinterpret_cast<fftw_complex*>(a.data()),
            reinterpret_cast<fftw_complex*>(b.data()),
            dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed for n=" + std::to_string(n));
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, bool>, fftw_plan> plans_;
    bool threads_initialised_ = false;
};

}  // namespace

void transform(int n, Direction dir, std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out) {
    const std::size_t count = static_cast<std::size_t>(n) * n * n;
    if (in.size() != count || out.size() != count)
        throw std::invalid_argument("fft::transform: buffer size does not match n^3");
    fftw_plan plan = PlanCache::instance().get(n, dir);
    // FFTW does not write to the input of an out-of-place c2c transform.
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

int worker_count() {
    const char* env = std::getenv("FRNS_THREADS");
    if (env == nullptr) return 1;
    try {
        const int v = std::stoi(env);
        return v > 0 ? v : 1;
    } catch (const std::exception&) {
        return 1;
    }
}

}  // namespace fracns::fft

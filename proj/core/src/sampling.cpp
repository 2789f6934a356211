#include "chorus/sampling.hpp"

#include "chorus/errors.hpp"

#include <cmath>

namespace chorus {

int sample_poisson(double mean, StreamRng& rng) {
    if (!(mean > 0.0)) {
        throw ConfigError("rate", "Poisson mean must be strictly positive");
    }
    // Knuth: multiply uniforms until the product drops below exp(-mean).
    // p underflows to zero in finitely many steps, so the loop terminates
    // even when exp(-mean) itself underflows.
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.next_uniform();
    } while (p > limit);
    return k - 1;
}

double sample_interarrival(double rate, InterArrivalMode mode, StreamRng& rng) {
    if (!(rate > 0.0)) {
        throw ConfigError("rate", "inter-arrival rate must be strictly positive");
    }
    if (mode == InterArrivalMode::ExponentialRate) {
        const double u = rng.next_uniform();
        return -std::log1p(-u) / rate;
    }
    return static_cast<double>(sample_poisson(rate, rng));
}

} // namespace chorus

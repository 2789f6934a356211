#pragma once

#include "chorus/random.hpp"
#include "chorus/types.hpp"

namespace chorus {

/// Waiting time until an actor's next event of one kind, in simulated minutes.
///
/// ExponentialRate treats `rate` as events per unit time and returns an
/// Exponential(rate) variate via inverse CDF, -log(1 - u) / rate; the
/// resulting renewal process has Poisson-distributed event counts with mean
/// `rate` per minute. LiteralPoisson instead returns an integer
/// Poisson(rate) draw used directly as the waiting time, which reproduces
/// the sampling step of the simulation cycle verbatim (zero gaps included).
///
/// Throws ConfigError when rate <= 0.
double sample_interarrival(double rate, InterArrivalMode mode, StreamRng& rng);

/// Poisson(mean) variate by Knuth's product-of-uniforms method.
/// Throws ConfigError when mean <= 0.
int sample_poisson(double mean, StreamRng& rng);

} // namespace chorus

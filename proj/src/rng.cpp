#include "qsim/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qsim {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double Rng::normal() {
    // No spare caching: two uniforms in, one normal out, so the stream
    // position is a pure function of the call count.
    double u1 = uniform();
    const double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-54;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::pick(std::span<const double> weights) {
    if (weights.empty()) throw std::invalid_argument("Rng::pick: empty weight list");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("Rng::pick: negative weight");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("Rng::pick: zero total weight");
    const double x = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (x < acc) return i;
    }
    return weights.size() - 1;
}

std::string Rng::state_string() const {
    std::ostringstream os;
    os << gen_;
    return os.str();
}

}  // namespace qsim

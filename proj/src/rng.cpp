#include "mcalc/rng.hpp"

#include <cmath>

#include "mcalc/errors.hpp"

namespace mcalc {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

int SeededRng::uniform_int(int lo, int hi) {
    if (hi < lo) throw input_error("uniform_int: hi < lo");
    auto span = static_cast<double>(hi) - static_cast<double>(lo) + 1.0;
    int k = lo + static_cast<int>(uniform01() * span);
    return k > hi ? hi : k;
}

double SeededRng::gaussian() {
    double u1 = 1.0 - uniform01();  // (0,1]: keeps the log finite
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::vector<double> SeededRng::unit_vector(int dim) {
    if (dim < 1) throw input_error("unit_vector: dim must be positive");
    std::vector<double> v(dim);
    while (true) {
        double n2 = 0.0;
        for (auto& c : v) {
            c = gaussian();
            n2 += c * c;
        }
        if (n2 > 1e-24) {
            double inv = 1.0 / std::sqrt(n2);
            for (auto& c : v) c *= inv;
            return v;
        }
    }
}

}  // namespace mcalc

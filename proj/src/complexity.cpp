#include "rrbeam/complexity.hpp"

#include <string>

#include "rrbeam/types.hpp"

namespace rrbeam {

std::uint64_t complexity_model(Algorithm algorithm, std::uint64_t m, std::uint64_t d) {
    if (d < 1 || m < d) throw InvalidArgument("complexity_model: need M >= D >= 1");
    switch (algorithm) {
        case Algorithm::MvdrMjioSg:
            return 4 * m * d + 4 * d * d + 3 * d + m + 6;
        case Algorithm::MvdrMjioRls:
            return 4 * m * m + 3 * d * d + 3 * d + 2;
        case Algorithm::RcbMjioSg: {
            const std::uint64_t multiplier = m * d + d * d + 4 * m + d;
            const std::uint64_t steering = d * d * d + m * d + d;
            const std::uint64_t columns = 5 * m + d + 2;
            return multiplier + steering + columns;
        }
        case Algorithm::RcbMjioRls:
            return 2 * d * d * d + 7 * d * d + 4 * d + 3 + m * d;
        default:
            throw InvalidArgument("complexity_model: no closed-form count for '" +
                                  std::string(to_string(algorithm)) + "'");
    }
}

}  // namespace rrbeam

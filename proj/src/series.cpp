#include "tguhm/series.hpp"

#include <cmath>
#include <numeric>

#include "tguhm/error.hpp"

namespace tguhm {

Series::Series(std::vector<double> values, std::vector<std::int64_t> positions,
               std::string label)
    : values_(std::move(values)), positions_(std::move(positions)), label_(std::move(label)) {
    if (values_.size() != positions_.size()) {
        throw InputError("series '" + label_ + "': " + std::to_string(values_.size()) +
                         " values but " + std::to_string(positions_.size()) + " positions");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InputError("series '" + label_ + "': non-finite value at index " +
                             std::to_string(i + 1));
        }
        if (i > 0 && positions_[i] <= positions_[i - 1]) {
            throw InputError("series '" + label_ + "': positions not strictly increasing at index " +
                             std::to_string(i + 1));
        }
    }
}

Series Series::from_values(std::vector<double> values, std::string label) {
    std::vector<std::int64_t> positions(values.size());
    std::iota(positions.begin(), positions.end(), std::int64_t{1});
    return Series(std::move(values), std::move(positions), std::move(label));
}

double Series::at(std::size_t i) const {
    if (i < 1 || i > values_.size()) {
        throw ContractError("series index " + std::to_string(i) + " outside [1, " +
                            std::to_string(values_.size()) + "]");
    }
    return values_[i - 1];
}

}  // namespace tguhm

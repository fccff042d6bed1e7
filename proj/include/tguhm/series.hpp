#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tguhm {

/// One ordered run of copy-number ratios (usually a single chromosome).
///
/// Positions are window coordinates and must be strictly increasing; values
/// must be finite. Construction enforces both.
class Series {
public:
    Series() = default;
    Series(std::vector<double> values, std::vector<std::int64_t> positions,
           std::string label = {});

    /// Positions default to 1..n.
    static Series from_values(std::vector<double> values, std::string label = {});

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    std::span<const double> values() const { return values_; }
    std::span<const std::int64_t> positions() const { return positions_; }
    const std::string& label() const { return label_; }

    /// 1-based access, matching the index convention of the transform.
    double at(std::size_t i) const;

private:
    std::vector<double> values_;
    std::vector<std::int64_t> positions_;
    std::string label_;
};

}  // namespace tguhm

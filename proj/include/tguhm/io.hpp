#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tguhm/reconstruct.hpp"
#include "tguhm/series.hpp"

namespace tguhm {

struct RatioRecord {
    std::string chromosome;
    std::int64_t window_start = 0;
    std::int64_t window_end = 0;
    double ratio = 0.0;
};

struct ChromosomeRecords {
    std::string chromosome;
    std::vector<RatioRecord> records;  // sorted by window_start
};

struct RatioTable {
    std::vector<ChromosomeRecords> chromosomes;  // order of first appearance
    std::size_t dropped = 0;                     // missing / non-finite ratios
    std::vector<std::string> warnings;
};

/// Reads a tab-separated table whose header names (at least) the columns
/// chromosome, start, end, ratio. Lines starting with '#' are skipped.
/// Rows with NA / empty / non-finite ratio are dropped and counted. A row that
/// cannot be parsed raises InputError naming the line.
RatioTable read_ratio_table(std::istream& in, const std::string& source = "<stream>");
RatioTable read_ratio_file(const std::filesystem::path& path);

Series to_series(const ChromosomeRecords& chrom);

/// Writes the ratio table format understood by read_ratio_table.
void write_ratio_table(std::ostream& out, const std::vector<RatioRecord>& records);

enum class CallLabel { gain, loss, neutral };
std::string_view to_string(CallLabel call);

struct SegmentRecord {
    std::string chromosome;
    std::size_t start_window = 0;  // 1-based, inclusive, post-filtering index
    std::size_t end_window = 0;
    std::int64_t start_bp = 0;
    std::int64_t end_bp = 0;
    double mean_ratio = 0.0;
    std::size_t n_windows = 0;
    CallLabel call = CallLabel::neutral;
};

inline constexpr double call_baseline = 1.0;

CallLabel call_for(double mean, double theta, double baseline = call_baseline);

/// One record per segment of `seg`, which must cover exactly the windows of
/// `chrom`.
std::vector<SegmentRecord> make_segment_records(const ChromosomeRecords& chrom,
                                                const Segmentation& seg, double theta);

using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_metadata(std::ostream& out, const Metadata& meta);

/// Columns: chromosome, start_window, end_window, start_bp, end_bp,
/// mean_ratio (6 dp), n_windows, call, mean_ratio_exact (shortest text that
/// round-trips the double).
void write_segments(std::ostream& out, const std::vector<SegmentRecord>& segments,
                    const Metadata& meta);

/// Columns: chromosome, window_index, position_bp.
void write_change_points(std::ostream& out,
                         const std::vector<std::pair<std::string, std::vector<std::size_t>>>& cps,
                         const std::vector<ChromosomeRecords>& chromosomes, const Metadata& meta);

std::vector<SegmentRecord> read_segments(std::istream& in, const std::string& source = "<stream>");

/// Per-window fitted values for one chromosome, rebuilt from its segments.
std::vector<double> expand_segments(const std::vector<SegmentRecord>& segments,
                                    const std::string& chromosome);

/// Fixed-point text with 6 decimals.
std::string format_fixed6(double value);
/// Shortest text that parses back to the same double.
std::string format_exact(double value);

}  // namespace tguhm

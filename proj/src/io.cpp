#include "tguhm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "tguhm/error.hpp"

namespace tguhm {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string where(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line) + ": ";
}

template <class T>
bool parse_number(std::string_view text, T& out) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, out);
    return res.ec == std::errc{} && res.ptr == end && !text.empty();
}

bool is_missing(std::string_view text) {
    text = trim(text);
    return text.empty() || text == "NA" || text == "na" || text == "NaN" || text == "nan" ||
           text == "." || text == "null";
}

std::size_t column_index(const std::vector<std::string_view>& header,
                         std::initializer_list<std::string_view> names, const std::string& source,
                         std::size_t line) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        for (const auto name : names) {
            if (trim(header[i]) == name) return i;
        }
    }
    throw InputError(where(source, line) + "header lacks column '" + std::string(*names.begin()) + "'");
}

}  // namespace

std::string format_fixed6(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
    std::string s(buf, res.ptr);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::string format_exact(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

RatioTable read_ratio_table(std::istream& in, const std::string& source) {
    RatioTable table;
    std::map<std::string, std::size_t> index;
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t c_chrom = 0, c_start = 0, c_end = 0, c_ratio = 0, needed = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_tabs(line);
        if (!have_header) {
            c_chrom = column_index(fields, {"chromosome", "chrom", "chr"}, source, line_no);
            c_start = column_index(fields, {"start"}, source, line_no);
            c_end = column_index(fields, {"end"}, source, line_no);
            c_ratio = column_index(fields, {"ratio"}, source, line_no);
            needed = std::max({c_chrom, c_start, c_end, c_ratio}) + 1;
            have_header = true;
            continue;
        }
        if (fields.size() < needed) {
            throw InputError(where(source, line_no) + "expected at least " + std::to_string(needed) +
                             " columns, got " + std::to_string(fields.size()));
        }
        RatioRecord rec;
        rec.chromosome = std::string(trim(fields[c_chrom]));
        if (rec.chromosome.empty()) throw InputError(where(source, line_no) + "empty chromosome");
        if (!parse_number(fields[c_start], rec.window_start) ||
            !parse_number(fields[c_end], rec.window_end)) {
            throw InputError(where(source, line_no) + "start/end are not integers");
        }
        if (rec.window_start >= rec.window_end) {
            throw InputError(where(source, line_no) + "window start must be below window end");
        }
        if (is_missing(fields[c_ratio])) {
            ++table.dropped;
            continue;
        }
        if (!parse_number(fields[c_ratio], rec.ratio)) {
            throw InputError(where(source, line_no) + "ratio '" + std::string(trim(fields[c_ratio])) +
                             "' is not a number");
        }
        if (!std::isfinite(rec.ratio)) {
            ++table.dropped;
            continue;
        }
        auto [it, inserted] = index.try_emplace(rec.chromosome, table.chromosomes.size());
        if (inserted) table.chromosomes.push_back({rec.chromosome, {}});
        table.chromosomes[it->second].records.push_back(std::move(rec));
    }

    if (!have_header) {
        table.warnings.push_back(source + ": no data");
        return table;
    }
    for (auto& chrom : table.chromosomes) {
        auto& recs = chrom.records;
        const auto by_start = [](const RatioRecord& a, const RatioRecord& b) {
            return a.window_start < b.window_start;
        };
        if (!std::is_sorted(recs.begin(), recs.end(), by_start)) {
            std::stable_sort(recs.begin(), recs.end(), by_start);
            table.warnings.push_back(source + ": chromosome " + chrom.chromosome +
                                     " was not sorted by start; sorted");
        }
        for (std::size_t i = 1; i < recs.size(); ++i) {
            if (recs[i].window_start == recs[i - 1].window_start) {
                throw InputError(source + ": chromosome " + chrom.chromosome +
                                 " has duplicate window start " + std::to_string(recs[i].window_start));
            }
        }
    }
    if (table.dropped > 0) {
        table.warnings.push_back(source + ": dropped " + std::to_string(table.dropped) +
                                 " rows with missing or non-finite ratio");
    }
    return table;
}

RatioTable read_ratio_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return read_ratio_table(in, path.string());
}

Series to_series(const ChromosomeRecords& chrom) {
    std::vector<double> values;
    std::vector<std::int64_t> positions;
    values.reserve(chrom.records.size());
    positions.reserve(chrom.records.size());
    for (const auto& r : chrom.records) {
        values.push_back(r.ratio);
        positions.push_back(r.window_start);
    }
    return Series(std::move(values), std::move(positions), chrom.chromosome);
}

void write_ratio_table(std::ostream& out, const std::vector<RatioRecord>& records) {
    out << "chromosome\tstart\tend\tratio\n";
    for (const auto& r : records) {
        out << r.chromosome << '\t' << r.window_start << '\t' << r.window_end << '\t'
            << format_exact(r.ratio) << '\n';
    }
}

std::string_view to_string(CallLabel call) {
    switch (call) {
        case CallLabel::gain: return "gain";
        case CallLabel::loss: return "loss";
        case CallLabel::neutral: return "neutral";
    }
    return "neutral";
}

CallLabel call_for(double mean, double theta, double baseline) {
    if (mean - baseline > theta) return CallLabel::gain;
    if (baseline - mean > theta) return CallLabel::loss;
    return CallLabel::neutral;
}

std::vector<SegmentRecord> make_segment_records(const ChromosomeRecords& chrom,
                                                const Segmentation& seg, double theta) {
    if (seg.fitted.size() != chrom.records.size() || seg.segment_bounds.size() < 2) {
        throw ContractError("segmentation does not match the records of " + chrom.chromosome);
    }
    std::vector<SegmentRecord> out;
    out.reserve(seg.segment_count());
    for (std::size_t j = 0; j < seg.segment_count(); ++j) {
        const auto lo = seg.segment_bounds[j];
        const auto hi = seg.segment_bounds[j + 1];
        SegmentRecord s;
        s.chromosome = chrom.chromosome;
        s.start_window = lo + 1;
        s.end_window = hi;
        s.start_bp = chrom.records[lo].window_start;
        s.end_bp = chrom.records[hi - 1].window_end;
        s.mean_ratio = seg.segment_means[j];
        s.n_windows = hi - lo;
        s.call = call_for(s.mean_ratio, theta);
        out.push_back(std::move(s));
    }
    return out;
}

void write_metadata(std::ostream& out, const Metadata& meta) {
    for (const auto& [key, value] : meta) out << "# " << key << ": " << value << '\n';
}

void write_segments(std::ostream& out, const std::vector<SegmentRecord>& segments,
                    const Metadata& meta) {
    write_metadata(out, meta);
    out << "chromosome\tstart_window\tend_window\tstart_bp\tend_bp\tmean_ratio\tn_windows\tcall\t"
           "mean_ratio_exact\n";
    for (const auto& s : segments) {
        out << s.chromosome << '\t' << s.start_window << '\t' << s.end_window << '\t' << s.start_bp
            << '\t' << s.end_bp << '\t' << format_fixed6(s.mean_ratio) << '\t' << s.n_windows << '\t'
            << to_string(s.call) << '\t' << format_exact(s.mean_ratio) << '\n';
    }
}

void write_change_points(std::ostream& out,
                         const std::vector<std::pair<std::string, std::vector<std::size_t>>>& cps,
                         const std::vector<ChromosomeRecords>& chromosomes, const Metadata& meta) {
    write_metadata(out, meta);
    out << "chromosome\twindow_index\tposition_bp\n";
    for (const auto& [name, points] : cps) {
        const auto it = std::find_if(chromosomes.begin(), chromosomes.end(),
                                     [&](const auto& c) { return c.chromosome == name; });
        if (it == chromosomes.end()) throw ContractError("unknown chromosome " + name);
        for (const auto b : points) {
            // the level changes after window b; report the end of that window
            out << name << '\t' << b << '\t' << it->records.at(b - 1).window_end << '\n';
        }
    }
}

std::vector<SegmentRecord> read_segments(std::istream& in, const std::string& source) {
    std::vector<SegmentRecord> out;
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto f = split_tabs(line);
        if (!have_header) {
            if (f.size() < 9 || f[0] != "chromosome" || f[8] != "mean_ratio_exact") {
                throw InputError(where(source, line_no) + "not a segments table header");
            }
            have_header = true;
            continue;
        }
        if (f.size() < 9) throw InputError(where(source, line_no) + "expected 9 columns");
        SegmentRecord s;
        s.chromosome = std::string(f[0]);
        const bool ok = parse_number(f[1], s.start_window) && parse_number(f[2], s.end_window) &&
                        parse_number(f[3], s.start_bp) && parse_number(f[4], s.end_bp) &&
                        parse_number(f[6], s.n_windows) && parse_number(f[8], s.mean_ratio);
        if (!ok) throw InputError(where(source, line_no) + "malformed segment row");
        if (f[7] == "gain") {
            s.call = CallLabel::gain;
        } else if (f[7] == "loss") {
            s.call = CallLabel::loss;
        } else if (f[7] == "neutral") {
            s.call = CallLabel::neutral;
        } else {
            throw InputError(where(source, line_no) + "unknown call '" + std::string(f[7]) + "'");
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<double> expand_segments(const std::vector<SegmentRecord>& segments,
                                    const std::string& chromosome) {
    std::vector<double> fitted;
    for (const auto& s : segments) {
        if (s.chromosome != chromosome) continue;
        if (s.start_window != fitted.size() + 1 || s.end_window < s.start_window) {
            throw InputError("segments of " + chromosome + " are not contiguous at window " +
                             std::to_string(s.start_window));
        }
        fitted.insert(fitted.end(), s.end_window - s.start_window + 1, s.mean_ratio);
    }
    return fitted;
}

}  // namespace tguhm

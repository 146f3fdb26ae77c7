#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace holoball {

/// Deterministic double formatting: 17 significant digits (round-trip safe,
/// identical bytes between runs).
std::string fmt_g17(double x);

/// A CSV report with a config echo in '#'-prefixed header lines. Output is
/// byte-deterministic: fixed row order, fixed formatting, no timestamps.
struct CsvReport {
    std::vector<std::string> comments; // without the leading '#'
    std::string header;                // comma-separated column names
    std::vector<std::string> rows;     // already formatted

    void write(const std::filesystem::path& file) const;
    std::string to_string() const;
};

/// Per-norm report row (norms module interface):
/// norm_name,n,s,value,argmax_r,argmax_center_index,nodes_used,seed
std::string norm_csv_row(const std::string& norm_name, int n, double s, double value,
                         double argmax_r, std::size_t argmax_center,
                         std::size_t nodes_used, std::uint64_t seed);
inline const char* kNormCsvHeader =
    "norm_name,n,s,value,argmax_r,argmax_center_index,nodes_used,seed";

/// Identity-check row: check_name,n,s,max_residual,probes,tolerance,pass
std::string check_csv_row(const std::string& check_name, int n, double s,
                          double max_residual, std::size_t probes, double tolerance,
                          bool pass);
inline const char* kCheckCsvHeader =
    "check_name,n,s,max_residual,probes,tolerance,pass";

/// Carleson row: measure_id,p,constant,argmax_r,argmax_center_index
std::string carleson_csv_row(const std::string& measure_id, double p,
                             double constant, double argmax_r,
                             std::size_t argmax_center);
inline const char* kCarlesonCsvHeader =
    "measure_id,p,constant,argmax_r,argmax_center_index";

} // namespace holoball

#include "holoball/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace holoball {

std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string CsvReport::to_string() const {
    std::ostringstream os;
    for (const auto& c : comments) os << "# " << c << '\n';
    os << header << '\n';
    for (const auto& r : rows) os << r << '\n';
    return os.str();
}

void CsvReport::write(const std::filesystem::path& file) const {
    std::ofstream os(file, std::ios::trunc | std::ios::binary);
    if (!os) throw std::runtime_error("CsvReport: cannot open " + file.string());
    os << to_string();
}

std::string norm_csv_row(const std::string& norm_name, int n, double s, double value,
                         double argmax_r, std::size_t argmax_center,
                         std::size_t nodes_used, std::uint64_t seed) {
    std::ostringstream os;
    os << norm_name << ',' << n << ',' << fmt_g17(s) << ',' << fmt_g17(value) << ','
       << fmt_g17(argmax_r) << ',' << argmax_center << ',' << nodes_used << ','
       << seed;
    return os.str();
}

std::string check_csv_row(const std::string& check_name, int n, double s,
                          double max_residual, std::size_t probes, double tolerance,
                          bool pass) {
    std::ostringstream os;
    os << check_name << ',' << n << ',' << fmt_g17(s) << ',' << fmt_g17(max_residual)
       << ',' << probes << ',' << fmt_g17(tolerance) << ','
       << (pass ? "pass" : "fail");
    return os.str();
}

std::string carleson_csv_row(const std::string& measure_id, double p,
                             double constant, double argmax_r,
                             std::size_t argmax_center) {
    std::ostringstream os;
    os << measure_id << ',' << fmt_g17(p) << ',' << fmt_g17(constant) << ','
       << fmt_g17(argmax_r) << ',' << argmax_center;
    return os.str();
}

} // namespace holoball

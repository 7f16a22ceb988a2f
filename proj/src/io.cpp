#include "memsfbp/io.hpp"

#include <cstdio>
#include <filesystem>

#include <json.hpp>

namespace memsfbp {

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void write_csv_header(std::ofstream& out, const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << cols[i] << (i + 1 < cols.size() ? "," : "\n");
    }
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    return out;
}

} // namespace

void write_record_csv(const SimRecord& rec, const std::string& path) {
    std::ofstream out = open_out(path);
    write_csv_header(out, {"t", "gap_min", "E_alpha", "max_abs_g1", "max_abs_g2"});
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
        out << format_sci(rec.times[k]) << ',' << format_sci(rec.gap_min[k]) << ','
            << format_sci(rec.e_alpha[k]) << ',' << format_sci(rec.max_g1[k]) << ','
            << format_sci(rec.max_g2[k]) << '\n';
    }
}

void write_snapshots_csv(const SimRecord& rec, const std::string& dir,
                         const std::string& prefix) {
    std::filesystem::create_directories(dir);
    for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "%s_%06zu.csv", prefix.c_str(), k);
        std::ofstream out = open_out(dir + "/" + name);
        write_csv_header(out, {"x", "u", "v"});
        const MembraneState& s = rec.snapshots[k];
        for (int i = 0; i <= s.grid.n; ++i) {
            const std::size_t si = static_cast<std::size_t>(i);
            out << format_sci(s.grid.x(i)) << ',' << format_sci(s.u[si]) << ','
                << format_sci(s.v[si]) << '\n';
        }
    }
}

void write_record_summary_json(const SimRecord& rec, const std::string& path) {
    nlohmann::ordered_json j;
    j["model"] = rec.model;
    j["verdict"] = to_string(rec.verdict);
    if (rec.verdict == Verdict::touchdown) {
        j["touchdown_time"] = rec.touchdown_time;
    }
    j["recorded_strides"] = rec.times.size();
    if (!rec.times.empty()) {
        j["final_time"] = rec.times.back();
        j["final_gap_min"] = rec.gap_min.back();
        j["final_E_alpha"] = rec.e_alpha.back();
    }
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_samples_csv(const std::vector<PhysicalSample>& samples, const std::string& path) {
    std::ofstream out = open_out(path);
    write_csv_header(out, {"x", "z", "value", "inside"});
    for (const PhysicalSample& s : samples) {
        out << format_sci(s.x) << ',' << format_sci(s.z) << ',' << format_sci(s.value)
            << ',' << (s.inside ? "true" : "false") << '\n';
    }
}

} // namespace memsfbp

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "memsfbp/dynamics.hpp"
#include "memsfbp/transform.hpp"

namespace memsfbp {

/// Fixed 17-significant-digit scientific formatting; identical inputs give
/// byte-identical files.
std::string format_sci(double v);

void write_csv_header(std::ofstream& out, const std::vector<std::string>& cols);

/// t, gap_min, E_alpha, max|g1|, max|g2| per recorded stride.
void write_record_csv(const SimRecord& rec, const std::string& path);

/// One (x, u, v) file per snapshot: <prefix>_NNNNNN.csv.
void write_snapshots_csv(const SimRecord& rec, const std::string& dir,
                         const std::string& prefix);

/// Verdict, touchdown time, model tag, final gap.
void write_record_summary_json(const SimRecord& rec, const std::string& path);

/// x, z, value, inside rows of a rasterized field.
void write_samples_csv(const std::vector<PhysicalSample>& samples, const std::string& path);

} // namespace memsfbp

#pragma once

#include <string>
#include <vector>

#include "gaplab/hamiltonian.hpp"
#include "gaplab/planting.hpp"

namespace gaplab {

/// Run provenance echoed into every output file: CSV as '#' comment lines,
/// JSON as a leading "meta" object.
struct FileMeta {
    std::string subcommand;
    std::string config;  // effective flag settings
    std::string seed;    // decimal seed, or empty when the command draws none
};

/// Shortest decimal representation that reparses to the identical double.
std::string format_double(double v);

// Interchange format:
// {"d": int, "sites": int, "edges": [[i,j],...],
//  "terms": [[[re,im], ... d^4 row-major entries], ...]}
std::string spec_to_json(const HamiltonianSpec& spec, const FileMeta* meta = nullptr);
HamiltonianSpec spec_from_json(const std::string& text);

std::string records_to_json(const std::vector<PlantRecord>& records,
                            const FileMeta* meta = nullptr);
std::vector<PlantRecord> records_from_json(const std::string& text);

std::string csv_header(const FileMeta& meta);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace gaplab

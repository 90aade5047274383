#include "gaplab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gaplab {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

ordered_json meta_to_json(const FileMeta& meta) {
    ordered_json j;
    j["tool"] = std::string("gaplab ") + kVersion;
    j["subcommand"] = meta.subcommand;
    j["config"] = meta.config;
    j["seed"] = meta.seed;
    return j;
}

}  // namespace

std::string spec_to_json(const HamiltonianSpec& spec, const FileMeta* meta) {
    ordered_json j;
    if (meta) j["meta"] = meta_to_json(*meta);
    j["d"] = spec.graph.local_dim();
    j["sites"] = spec.graph.num_sites();
    ordered_json edges = ordered_json::array();
    for (const Edge& e : spec.graph.edges()) edges.push_back({e.first, e.second});
    j["edges"] = std::move(edges);
    ordered_json terms = ordered_json::array();
    for (const LocalTerm& t : spec.terms) {
        ordered_json entries = ordered_json::array();
        for (Index r = 0; r < t.matrix.rows(); ++r)
            for (Index c = 0; c < t.matrix.cols(); ++c)
                entries.push_back({t.matrix(r, c).real(), t.matrix(r, c).imag()});
        terms.push_back(std::move(entries));
    }
    j["terms"] = std::move(terms);
    return j.dump();
}

HamiltonianSpec spec_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const int d = j.at("d").get<int>();
    const int sites = j.at("sites").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges"))
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    InteractionGraph graph(sites, d, edges);
    const Index d2 = static_cast<Index>(d) * d;
    std::vector<LocalTerm> terms;
    const auto& jterms = j.at("terms");
    if (jterms.size() != edges.size())
        throw std::invalid_argument("spec_from_json: one term per edge required");
    for (std::size_t i = 0; i < jterms.size(); ++i) {
        const auto& entries = jterms[i];
        if (static_cast<Index>(entries.size()) != d2 * d2)
            throw std::invalid_argument("spec_from_json: term entry count must be d^4");
        Matrix m(d2, d2);
        Index k = 0;
        for (Index r = 0; r < d2; ++r)
            for (Index c = 0; c < d2; ++c, ++k)
                m(r, c) = Complex(entries[static_cast<std::size_t>(k)].at(0).get<double>(),
                                  entries[static_cast<std::size_t>(k)].at(1).get<double>());
        terms.emplace_back(edges[i], std::move(m));
    }
    return HamiltonianSpec(std::move(graph), std::move(terms));
}

namespace {

ordered_json record_to_json(const PlantRecord& r) {
    ordered_json j;
    j["kind"] = to_string(r.kind);
    if (r.kind == PlantKind::projector_vertex)
        j["location"] = r.vertex;
    else
        j["location"] = {r.edge.first, r.edge.second};
    j["s"] = r.s;
    j["eps"] = r.eps;
    j["z"] = r.z;
    ordered_json shifts = ordered_json::array();
    for (const auto& [e, b] : r.beta_shifts)
        shifts.push_back({{"edge", {e.first, e.second}}, {"beta", b}});
    j["beta_shifts"] = std::move(shifts);
    j["k_or_h"] = r.k_or_h;
    j["lambda_atoms"] = r.lambda_atoms;
    j["lambda0"] = r.lambda0;
    return j;
}

PlantRecord record_from_json(const nlohmann::json& j) {
    PlantRecord r;
    r.kind = plant_kind_from_string(j.at("kind").get<std::string>());
    if (r.kind == PlantKind::projector_vertex) {
        r.vertex = j.at("location").get<int>();
    } else {
        r.edge = {j.at("location").at(0).get<int>(), j.at("location").at(1).get<int>()};
    }
    r.s = j.at("s").get<double>();
    r.eps = j.at("eps").get<double>();
    r.z = j.at("z").get<int>();
    for (const auto& shift : j.at("beta_shifts")) {
        Edge e{shift.at("edge").at(0).get<int>(), shift.at("edge").at(1).get<int>()};
        r.beta_shifts[e] = shift.at("beta").get<double>();
    }
    r.k_or_h = j.at("k_or_h").get<int>();
    r.lambda_atoms = j.at("lambda_atoms").get<std::vector<double>>();
    r.lambda0 = j.at("lambda0").get<double>();
    return r;
}

}  // namespace

std::string records_to_json(const std::vector<PlantRecord>& records, const FileMeta* meta) {
    ordered_json j;
    if (meta) j["meta"] = meta_to_json(*meta);
    ordered_json plants = ordered_json::array();
    for (const auto& r : records) plants.push_back(record_to_json(r));
    j["plants"] = std::move(plants);
    return j.dump();
}

std::vector<PlantRecord> records_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    std::vector<PlantRecord> records;
    for (const auto& p : j.at("plants")) records.push_back(record_from_json(p));
    return records;
}

std::string csv_header(const FileMeta& meta) {
    std::ostringstream out;
    out << "# gaplab " << kVersion << "\n";
    out << "# subcommand: " << meta.subcommand << "\n";
    out << "# config: " << meta.config << "\n";
    out << "# seed: " << (meta.seed.empty() ? "none" : meta.seed) << "\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace gaplab

#include "gaplab/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaplab/experiments.hpp"
#include "gaplab/io.hpp"
#include "gaplab/rng.hpp"

namespace gaplab::cli {

namespace {

struct SeedFlag {
    std::string raw;  // decimal integer or "random"
    std::uint64_t value = 0;
    bool resolved = false;

    /// Resolves "random" to a fresh seed and prints it, so every run is
    /// reproducible after the fact.
    std::uint64_t resolve() {
        if (resolved) return value;
        if (raw == "random") {
            std::random_device rd;
            value = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            std::cout << "seed: " << value << "\n";
        } else {
            std::size_t pos = 0;
            value = std::stoull(raw, &pos);
            if (pos != raw.size())
                throw CLI::ValidationError("--seed", "must be an integer or 'random'");
        }
        resolved = true;
        return value;
    }
};

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw std::invalid_argument("expected a comma-separated number list");
    return out;
}

std::vector<int> parse_ints(const std::string& csv) {
    std::vector<int> out;
    for (double v : parse_doubles(csv)) out.push_back(static_cast<int>(v));
    return out;
}

Edge parse_edge(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("expected an edge as p,q");
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

std::vector<Edge> parse_edges(const std::string& s) {
    std::vector<Edge> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ';'))
        if (!tok.empty()) out.push_back(parse_edge(tok));
    if (out.empty()) throw std::invalid_argument("expected edges as p,q;r,s;...");
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += format_double(v[i]);
    }
    return s;
}

/// Shared model flags for `ham random` and `sweep gap-vs-size`.
struct ModelFlags {
    std::string model = "gaussian";
    int beta = 2;
    int rank_min = -1, rank_max = -1;
    std::string atoms, probs;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model, "gaussian | projector | discrete | identity")
            ->check(CLI::IsMember({"gaussian", "projector", "discrete", "identity"}));
        cmd->add_option("--beta", beta, "ensemble index, 1 or 2")->check(CLI::IsMember({1, 2}));
        cmd->add_option("--rank", rank_min, "projector rank (fixed)");
        cmd->add_option("--rank-max", rank_max, "projector rank upper bound (uniform)");
        cmd->add_option("--atoms", atoms, "discrete atoms, comma separated, ascending");
        cmd->add_option("--probs", probs, "matching probabilities, sum 1");
    }

    TermModel build(int d) const {
        const int d2 = d * d;
        if (model == "gaussian") return GaussianModel{beta};
        if (model == "identity") return ProjectorModel{d2, d2, beta};
        if (model == "projector") {
            if (rank_min < 0) throw std::invalid_argument("--rank required for projector model");
            return ProjectorModel{rank_min, rank_max < 0 ? rank_min : rank_max, beta};
        }
        DiscreteSpectrumLaw law{parse_doubles(atoms), parse_doubles(probs)};
        law.validate();
        return DiscreteModel{std::move(law), beta};
    }

    std::string describe() const {
        std::string s = "model=" + model + " beta=" + std::to_string(beta);
        if (rank_min >= 0) s += " rank=" + std::to_string(rank_min);
        if (rank_max >= 0) s += " rank_max=" + std::to_string(rank_max);
        if (!atoms.empty()) s += " atoms=" + atoms + " probs=" + probs;
        return s;
    }
};

std::string bool_str(bool b) { return b ? "1" : "0"; }

std::string csv_quote(const std::string& s) {
    if (s.find(',') == std::string::npos) return s;
    return "\"" + s + "\"";
}

void write_certificates(const std::string& path, const std::vector<CertificateReport>& reports,
                        const FileMeta& meta) {
    std::ostringstream out;
    out << csv_header(meta);
    out << "kind,location,eps,z,bound,observed,pass\n";
    for (const auto& r : reports) {
        out << to_string(r.kind) << "," << csv_quote(r.location) << "," << format_double(r.eps)
            << "," << r.z << "," << format_double(r.bound) << "," << format_double(r.observed)
            << "," << bool_str(r.pass) << "\n";
        std::cout << (r.pass ? "PASS " : "FAIL ") << to_string(r.kind) << " at "
                  << r.location << " (bound " << format_double(r.bound) << ", observed "
                  << format_double(r.observed) << ")\n";
    }
    write_file(path, out.str());
}

void write_mc_csv(const std::string& path, const McResult& r, const FileMeta& meta) {
    std::ostringstream out;
    out << csv_header(meta);
    out << "eps,estimate,stderr,trials\n";
    for (std::size_t i = 0; i < r.x_values.size(); ++i)
        out << format_double(r.x_values[i]) << "," << format_double(r.estimates[i]) << ","
            << format_double(r.stderrs[i]) << "," << r.trials[i] << "\n";
    write_file(path, out.str());
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

void write_slope_csv(const std::string& path, const McResult& r, double paper_exponent,
                     double alt_exponent, const FileMeta& meta) {
    std::ostringstream out;
    out << csv_header(meta);
    out << "slope,ci_lo,ci_hi,paper_exponent,dimension_count_exponent\n";
    if (r.slope) {
        out << format_double(r.slope->slope) << "," << format_double(r.slope->ci_lo) << ","
            << format_double(r.slope->ci_hi) << "," << format_double(paper_exponent) << ","
            << format_double(alt_exponent) << "\n";
    } else {
        out << "nan,nan,nan," << format_double(paper_exponent) << ","
            << format_double(alt_exponent) << "\n";
    }
    write_file(path, out.str());
}

HamiltonianSpec load_or_build_base(const std::string& in, int sites, int beta,
                                   std::uint64_t seed) {
    if (!in.empty()) return spec_from_json(read_file(in));
    if (sites < 2)
        throw std::invalid_argument("give --in <spec.json> or --sites N for a random base");
    return random_spec(chain(sites, false, 2), GaussianModel{beta},
                       derive_seed(seed, {0x62617365ULL}));
}

struct Pending {
    std::function<int()> action;
};

void wire(CLI::App& app, Pending& pending) {

    // ---------------- ensemble ----------------
    auto* ensemble = app.add_subcommand("ensemble", "samplers and Monte Carlo estimators");
    ensemble->require_subcommand(1);

    {
        auto* sample = ensemble->add_subcommand("sample", "draw one random matrix");
        auto n = std::make_shared<int>(2);
        auto beta = std::make_shared<int>(2);
        auto kind = std::make_shared<std::string>("gaussian");
        auto rank = std::make_shared<int>(0);
        auto atoms = std::make_shared<std::string>();
        auto probs = std::make_shared<std::string>();
        auto seed = std::make_shared<SeedFlag>();
        auto out = std::make_shared<std::string>();
        sample->add_option("--n", *n, "matrix dimension")->required();
        sample->add_option("--beta", *beta)->check(CLI::IsMember({1, 2}));
        sample->add_option("--kind", *kind)
            ->check(CLI::IsMember({"gaussian", "haar", "projector", "discrete"}));
        sample->add_option("--rank", *rank, "projector rank");
        sample->add_option("--atoms", *atoms);
        sample->add_option("--probs", *probs);
        sample->add_option("--seed", seed->raw, "integer or 'random'")->required();
        sample->add_option("--out", *out, "output JSON path")->required();
        sample->callback([=, &pending] {
            pending.action = [=] {
                const std::uint64_t s = seed->resolve();
                Matrix m;
                if (*kind == "gaussian")
                    m = sample_gaussian({*n, *beta, s});
                else if (*kind == "haar")
                    m = sample_haar_eigenvectors(*n, *beta, s);
                else if (*kind == "projector")
                    m = sample_projector(*n, *rank, *beta, s);
                else {
                    DiscreteSpectrumLaw law{parse_doubles(*atoms), parse_doubles(*probs)};
                    m = sample_discrete_term(*n, law, *beta, s);
                }
                nlohmann::ordered_json j;
                j["meta"] = {{"tool", std::string("gaplab ") + kVersion},
                             {"subcommand", "ensemble sample"},
                             {"config", "n=" + std::to_string(*n) + " beta=" +
                                            std::to_string(*beta) + " kind=" + *kind},
                             {"seed", std::to_string(s)}};
                j["dim"] = *n;
                nlohmann::ordered_json entries = nlohmann::ordered_json::array();
                for (Index r = 0; r < m.rows(); ++r)
                    for (Index c = 0; c < m.cols(); ++c)
                        entries.push_back({m(r, c).real(), m(r, c).imag()});
                j["entries"] = std::move(entries);
                write_file(*out, j.dump());
                return 0;
            };
        });
    }

    auto add_mc = [&](const char* name, const char* help, bool spacing) {
        auto* mc = ensemble->add_subcommand(name, help);
        auto n = std::make_shared<int>(2);
        auto beta = std::make_shared<int>(1);
        auto grid = std::make_shared<std::string>();
        auto trials = std::make_shared<long>(100000);
        auto workers = std::make_shared<int>(1);
        auto seed = std::make_shared<SeedFlag>();
        auto out = std::make_shared<std::string>();
        auto slope_out = std::make_shared<std::string>();
        mc->add_option("--n", *n)->required();
        mc->add_option("--beta", *beta)->required()->check(CLI::IsMember({1, 2}));
        mc->add_option("--eps-grid", *grid, "strictly decreasing, >= 4 points")->required();
        mc->add_option("--trials", *trials)->required();
        mc->add_option("--workers", *workers);
        mc->add_option("--seed", seed->raw, "integer or 'random'")->required();
        mc->add_option("--out", *out)->required();
        mc->add_option("--slope-out", *slope_out, "slope summary CSV");
        mc->callback([=, &pending] {
            pending.action = [=] {
                const std::uint64_t s = seed->resolve();
                const auto eps = parse_doubles(*grid);
                const McResult r =
                    spacing ? mc_spacing_exponent(*n, *beta, eps, *trials, s, *workers)
                            : mc_near_identity_exponent(*n, *beta, eps, *trials, s, *workers);
                FileMeta meta;
                meta.subcommand = std::string("ensemble ") + name;
                meta.config = "n=" + std::to_string(*n) + " beta=" + std::to_string(*beta) +
                              " eps-grid=" + join_doubles(eps) +
                              " trials=" + std::to_string(*trials);
                meta.seed = std::to_string(s);
                write_mc_csv(*out, r, meta);
                const ExponentPrediction pred = predicted_exponents(*n, *beta);
                const double paper = spacing ? 4.0 : pred.paper_value;
                const double alt = spacing ? *beta + 1.0 : pred.dimension_count;
                if (!slope_out->empty()) write_slope_csv(*slope_out, r, paper, alt, meta);
                if (r.slope)
                    std::cout << "slope " << format_double(r.slope->slope) << " (3-sigma ["
                              << format_double(r.slope->ci_lo) << ", "
                              << format_double(r.slope->ci_hi) << "]), reference exponents: "
                              << format_double(paper) << " / " << format_double(alt) << "\n";
                return 0;
            };
        });
    };
    add_mc("mc-exponent", "near-identity probability vs epsilon", false);
    add_mc("mc-spacing", "two-lowest-eigenvalue spacing probability vs epsilon", true);

    // ---------------- ham ----------------
    auto* ham = app.add_subcommand("ham", "build Hamiltonian specs");
    ham->require_subcommand(1);
    {
        auto* rnd = ham->add_subcommand("random", "independent random terms on a graph");
        auto sites = std::make_shared<int>(0);
        auto dims = std::make_shared<std::string>();
        auto periodic = std::make_shared<bool>(false);
        auto d = std::make_shared<int>(2);
        auto flags = std::make_shared<ModelFlags>();
        auto seed = std::make_shared<SeedFlag>();
        auto out = std::make_shared<std::string>();
        rnd->add_option("--sites", *sites, "chain length");
        rnd->add_option("--lattice", *dims, "lattice extents, e.g. 2,3");
        rnd->add_flag("--periodic", *periodic);
        rnd->add_option("--d", *d, "local dimension");
        flags->attach(rnd);
        rnd->add_option("--seed", seed->raw, "integer or 'random'")->required();
        rnd->add_option("--out", *out)->required();
        rnd->callback([=, &pending] {
            pending.action = [=] {
                const std::uint64_t s = seed->resolve();
                InteractionGraph g = dims->empty()
                                         ? chain(*sites, *periodic, *d)
                                         : lattice(parse_ints(*dims), *periodic, *d);
                const auto spec = random_spec(g, flags->build(*d), s);
                FileMeta meta;
                meta.subcommand = "ham random";
                meta.config = (dims->empty() ? "sites=" + std::to_string(*sites)
                                             : "lattice=" + *dims) +
                              " periodic=" + bool_str(*periodic) + " d=" + std::to_string(*d) +
                              " " + flags->describe();
                meta.seed = std::to_string(s);
                write_file(*out, spec_to_json(spec, &meta));
                return 0;
            };
        });
    }
    {
        auto* pc = ham->add_subcommand("pauli-chain", "16 couplings per bond, d = 2");
        auto sites = std::make_shared<int>(2);
        auto only = std::make_shared<std::string>();
        auto seed = std::make_shared<SeedFlag>();
        auto out = std::make_shared<std::string>();
        pc->add_option("--sites", *sites)->required();
        pc->add_option("--only", *only,
                       "deterministic couplings, e.g. J33=1,J00=0.5 (applied to every bond)");
        pc->add_option("--seed", seed->raw, "integer or 'random'");
        pc->add_option("--out", *out)->required();
        pc->callback([=, &pending] {
            pending.action = [=] {
                PauliChainParams params;
                params.num_sites = *sites;
                params.couplings.assign(static_cast<std::size_t>(*sites - 1), {});
                std::string seed_echo;
                if (!only->empty()) {
                    std::stringstream ss(*only);
                    std::string tok;
                    while (std::getline(ss, tok, ',')) {
                        if (tok.size() < 5 || tok[0] != 'J' || tok[3] != '=')
                            throw std::invalid_argument("--only expects Jab=value tokens");
                        const int a = tok[1] - '0';
                        const int b = tok[2] - '0';
                        if (a < 0 || a > 3 || b < 0 || b > 3)
                            throw std::invalid_argument("--only indices must be 0..3");
                        const double v = std::stod(tok.substr(4));
                        for (auto& bond : params.couplings)
                            bond[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = v;
                    }
                } else {
                    if (seed->raw.empty())
                        throw std::invalid_argument(
                            "pauli-chain needs --seed (or --only for deterministic couplings)");
                    const std::uint64_t s = seed->resolve();
                    seed_echo = std::to_string(s);
                    std::normal_distribution<double> normal(0.0, 1.0);
                    for (std::size_t bond = 0; bond < params.couplings.size(); ++bond) {
                        auto rng = make_rng(
                            derive_seed(s, {0x4a736431ULL, static_cast<std::uint64_t>(bond)}));
                        for (auto& row : params.couplings[bond])
                            for (double& j : row) j = normal(rng);
                    }
                }
                const auto spec = pauli_chain(params);
                FileMeta meta;
                meta.subcommand = "ham pauli-chain";
                meta.config = "sites=" + std::to_string(*sites) +
                              (only->empty() ? "" : " only=" + *only);
                meta.seed = seed_echo;
                write_file(*out, spec_to_json(spec, &meta));
                return 0;
            };
        });
    }

    // ---------------- spectrum ----------------
    {
        auto* sp = app.add_subcommand("spectrum", "eigenvalues of a spec");
        auto in = std::make_shared<std::string>();
        auto method = std::make_shared<std::string>("dense");
        auto k = std::make_shared<int>(4);
        auto tol = std::make_shared<double>(1e-8);
        auto max_iter = std::make_shared<int>(500);
        auto seed = std::make_shared<SeedFlag>();
        auto out = std::make_shared<std::string>();
        sp->add_option("--in", *in)->required();
        sp->add_option("--method", *method)->check(CLI::IsMember({"dense", "lanczos"}));
        sp->add_option("--k", *k, "number of lowest eigenvalues (lanczos)");
        sp->add_option("--tol", *tol, "residual tolerance (lanczos)");
        sp->add_option("--max-iter", *max_iter);
        sp->add_option("--seed", seed->raw, "start-vector seed (lanczos)");
        sp->add_option("--out", *out)->required();
        sp->callback([=, &pending] {
            pending.action = [=] {
                const auto spec = spec_from_json(read_file(*in));
                Spectrum spectrum;
                std::string seed_echo;
                if (*method == "dense") {
                    spectrum = dense_spectrum(assemble_dense(spec));
                } else {
                    if (seed->raw.empty())
                        throw std::invalid_argument("--seed required for lanczos");
                    LanczosOptions opts;
                    opts.k = *k;
                    opts.tol = *tol;
                    opts.max_iter = *max_iter;
                    opts.seed = seed->resolve();
                    seed_echo = std::to_string(opts.seed);
                    spectrum = lanczos_lowest(
                        [&spec](const Vector& x, Vector& y) { y = matvec(spec, x); },
                        spec.dim(), opts);
                    if (!spectrum.converged)
                        throw SolverError("lanczos did not converge within max-iter");
                }
                FileMeta meta;
                meta.subcommand = "spectrum";
                meta.config = "in=" + *in + " method=" + *method +
                              (*method == "lanczos" ? " k=" + std::to_string(*k) : "");
                meta.seed = seed_echo;
                std::ostringstream csv;
                csv << csv_header(meta);
                csv << "index,eigenvalue\n";
                for (Index i = 0; i < spectrum.eigenvalues.size(); ++i)
                    csv << i << "," << format_double(spectrum.eigenvalues[i]) << "\n";
                write_file(*out, csv.str());
                return 0;
            };
        });
    }

    // ---------------- gap ----------------
    {
        auto* gp = app.add_subcommand("gap", "gap and ground degeneracy of a spec");
        auto in = std::make_shared<std::string>();
        auto tau = std::make_shared<double>(-1.0);
        auto out = std::make_shared<std::string>();
        gp->add_option("--in", *in)->required();
        gp->add_option("--tau", *tau, "degeneracy tolerance (default 1e-8 * max(1, width))");
        gp->add_option("--out", *out)->required();
        gp->callback([=, &pending] {
            pending.action = [=] {
                const auto spec = spec_from_json(read_file(*in));
                const Spectrum spectrum = dense_spectrum(assemble_dense(spec));
                const double t =
                    *tau >= 0.0 ? *tau : default_degeneracy_tol(spectrum.eigenvalues);
                const GapReport report = gap(spectrum, t);
                FileMeta meta;
                meta.subcommand = "gap";
                meta.config = "in=" + *in + " tau=" + format_double(t);
                std::ostringstream csv;
                csv << csv_header(meta);
                csv << "lambda0,lambda1,gap,degeneracy,tau\n";
                csv << format_double(report.lambda0) << ","
                    << format_double(report.lambda1_distinct) << ","
                    << format_double(report.gap) << "," << report.ground_degeneracy << ","
                    << format_double(report.tau) << "\n";
                write_file(*out, csv.str());
                std::cout << "gap " << format_double(report.gap) << " degeneracy "
                          << report.ground_degeneracy << "\n";
                return 0;
            };
        });
    }

    // ---------------- plant ----------------
    auto* plant = app.add_subcommand("plant", "construct rare local regions");
    plant->require_subcommand(1);

    struct PlantCommon {
        std::string in;
        int sites = 0;
        int beta = 2;
        SeedFlag seed;
        std::string out;
        std::string record_out;

        void attach(CLI::App* cmd) {
            cmd->add_option("--in", in, "base spec JSON (otherwise random Gaussian chain)");
            cmd->add_option("--sites", sites, "random base chain length");
            cmd->add_option("--beta", beta)->check(CLI::IsMember({1, 2}));
            cmd->add_option("--seed", seed.raw, "integer or 'random'")->required();
            cmd->add_option("--out", out)->required();
            cmd->add_option("--record", record_out, "plant record JSON (default: <out>.record.json)");
        }
        std::string record_path() const {
            return record_out.empty() ? out + ".record.json" : record_out;
        }
        std::string base_config() const {
            return in.empty() ? "sites=" + std::to_string(sites) + " beta=" + std::to_string(beta)
                              : "in=" + in;
        }
    };

    {
        auto* pc = plant->add_subcommand("continuous", "nearly degenerate edge term");
        auto common = std::make_shared<PlantCommon>();
        auto edge = std::make_shared<std::string>();
        auto s = std::make_shared<double>(0.0);
        auto eps = std::make_shared<double>(0.0);
        auto floor = std::make_shared<double>(0.5);
        common->attach(pc);
        pc->add_option("--edge", *edge, "planted edge p,q")->required();
        pc->add_option("--s", *s, "planted splitting");
        pc->add_option("--eps", *eps, "perturbation scale");
        pc->add_option("--env-gap-floor", *floor);
        pc->callback([=, &pending] {
            pending.action = [=] {
                const std::uint64_t sd = common->seed.resolve();
                const auto base = load_or_build_base(common->in, common->sites, common->beta, sd);
                auto [planted, record] = plant_continuous_region(
                    base, parse_edge(*edge), *s, *eps, *floor,
                    derive_seed(sd, {0x706c616eULL}));
                FileMeta meta;
                meta.subcommand = "plant continuous";
                meta.config = common->base_config() + " edge=" + *edge +
                              " s=" + format_double(*s) + " eps=" + format_double(*eps) +
                              " env-gap-floor=" + format_double(*floor);
                meta.seed = std::to_string(sd);
                write_file(common->out, spec_to_json(planted, &meta));
                write_file(common->record_path(), records_to_json({record}, &meta));
                return 0;
            };
        });
    }
    {
        auto* pp = plant->add_subcommand("projector", "star of near-projectors at a vertex");
        auto common = std::make_shared<PlantCommon>();
        auto vertex = std::make_shared<int>(0);
        auto h = std::make_shared<int>(1);
        auto eps = std::make_shared<double>(0.0);
        common->attach(pp);
        pp->add_option("--vertex", *vertex, "r0")->required();
        pp->add_option("--h", *h, "kernel dimension, 1..d-1");
        pp->add_option("--eps", *eps);
        pp->callback([=, &pending] {
            pending.action = [=] {
                const std::uint64_t sd = common->seed.resolve();
                const auto base = load_or_build_base(common->in, common->sites, common->beta, sd);
                auto [planted, record] = plant_projector_region(
                    base, *vertex, *h, *eps, derive_seed(sd, {0x706c616eULL}));
                FileMeta meta;
                meta.subcommand = "plant projector";
                meta.config = common->base_config() + " vertex=" + std::to_string(*vertex) +
                              " h=" + std::to_string(*h) + " eps=" + format_double(*eps);
                meta.seed = std::to_string(sd);
                write_file(common->out, spec_to_json(planted, &meta));
                write_file(common->record_path(), records_to_json({record}, &meta));
                return 0;
            };
        });
    }
    {
        auto* pd = plant->add_subcommand("discrete", "exactly k-fold degenerate edge term");
        auto common = std::make_shared<PlantCommon>();
        auto edge = std::make_shared<std::string>();
        auto k = std::make_shared<int>(2);
        auto atoms = std::make_shared<std::string>("0,1");
        auto probs = std::make_shared<std::string>("0.5,0.5");
        common->attach(pd);
        pd->add_option("--edge", *edge)->required();
        pd->add_option("--k", *k, "ground multiplicity of the planted term");
        pd->add_option("--atoms", *atoms);
        pd->add_option("--probs", *probs);
        pd->callback([=, &pending] {
            pending.action = [=] {
                const std::uint64_t sd = common->seed.resolve();
                const auto base = load_or_build_base(common->in, common->sites, common->beta, sd);
                DiscreteSpectrumLaw law{parse_doubles(*atoms), parse_doubles(*probs)};
                auto [planted, record] = plant_discrete_region(
                    base, parse_edge(*edge), *k, law, derive_seed(sd, {0x706c616eULL}));
                FileMeta meta;
                meta.subcommand = "plant discrete";
                meta.config = common->base_config() + " edge=" + *edge +
                              " k=" + std::to_string(*k) + " atoms=" + *atoms;
                meta.seed = std::to_string(sd);
                write_file(common->out, spec_to_json(planted, &meta));
                write_file(common->record_path(), records_to_json({record}, &meta));
                return 0;
            };
        });
    }
    {
        auto* pl = plant->add_subcommand("dos-ladder", "several disjoint continuous plants");
        auto common = std::make_shared<PlantCommon>();
        auto edges = std::make_shared<std::string>();
        auto svals = std::make_shared<std::string>();
        auto eps = std::make_shared<double>(0.0);
        auto floor = std::make_shared<double>(0.5);
        common->attach(pl);
        pl->add_option("--edges", *edges, "semicolon-separated edges, e.g. 0,1;3,4")->required();
        pl->add_option("--s-values", *svals, "one splitting per edge")->required();
        pl->add_option("--eps", *eps);
        pl->add_option("--env-gap-floor", *floor);
        pl->callback([=, &pending] {
            pending.action = [=] {
                const std::uint64_t sd = common->seed.resolve();
                const auto base = load_or_build_base(common->in, common->sites, common->beta, sd);
                auto [planted, records] = plant_dos_ladder(
                    base, parse_edges(*edges), parse_doubles(*svals), *eps,
                    derive_seed(sd, {0x706c616eULL}), *floor);
                FileMeta meta;
                meta.subcommand = "plant dos-ladder";
                meta.config = common->base_config() + " edges=" + *edges +
                              " s-values=" + *svals + " eps=" + format_double(*eps);
                meta.seed = std::to_string(sd);
                write_file(common->out, spec_to_json(planted, &meta));
                write_file(common->record_path(), records_to_json(records, &meta));
                return 0;
            };
        });
    }

    // ---------------- certify ----------------
    {
        auto* ct = app.add_subcommand("certify", "check Weyl certificates of a planted spec");
        auto in = std::make_shared<std::string>();
        auto record = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        ct->add_option("--in", *in)->required();
        ct->add_option("--record", *record)->required();
        ct->add_option("--out", *out)->required();
        ct->callback([=, &pending] {
            pending.action = [=] {
                const auto spec = spec_from_json(read_file(*in));
                const auto records = records_from_json(read_file(*record));
                std::vector<CertificateReport> reports;
                for (const auto& r : records) {
                    switch (r.kind) {
                        case PlantKind::continuous_edge:
                            reports.push_back(certificate_continuous(spec, r));
                            break;
                        case PlantKind::projector_vertex:
                            reports.push_back(certificate_projector(spec, r));
                            break;
                        case PlantKind::discrete_edge:
                            reports.push_back(certificate_discrete(spec, r));
                            break;
                        case PlantKind::dos_ladder:
                            throw std::invalid_argument(
                                "dos_ladder records store their plants individually");
                    }
                }
                FileMeta meta;
                meta.subcommand = "certify";
                meta.config = "in=" + *in + " record=" + *record;
                write_certificates(*out, reports, meta);
                return 0;
            };
        });
    }

    // ---------------- scan ----------------
    auto* scan = app.add_subcommand("scan", "detectors over existing specs");
    scan->require_subcommand(1);
    {
        auto* rare = scan->add_subcommand("rare", "flag epsilon-rare edges");
        auto in = std::make_shared<std::string>();
        auto eps = std::make_shared<double>(0.1);
        auto tau = std::make_shared<double>(1e-10);
        auto out = std::make_shared<std::string>();
        rare->add_option("--in", *in)->required();
        rare->add_option("--eps", *eps)->required();
        rare->add_option("--tau", *tau, "degeneracy tolerance for the multiplicity column");
        rare->add_option("--out", *out)->required();
        rare->callback([=, &pending] {
            pending.action = [=] {
                const auto spec = spec_from_json(read_file(*in));
                const auto rows = rare_region_scan(spec, *eps, *tau);
                FileMeta meta;
                meta.subcommand = "scan rare";
                meta.config = "in=" + *in + " eps=" + format_double(*eps) +
                              " tau=" + format_double(*tau);
                std::ostringstream csv;
                csv << csv_header(meta);
                csv << "edge,local_spacing,max_neighbor_identity_distance,ground_multiplicity,"
                       "flagged\n";
                for (const auto& r : rows)
                    csv << csv_quote(std::to_string(r.edge.first) + "," +
                                     std::to_string(r.edge.second)) << ","
                        << format_double(r.local_spacing) << ","
                        << format_double(r.max_neighbor_identity_distance) << ","
                        << r.ground_multiplicity << "," << bool_str(r.flagged) << "\n";
                write_file(*out, csv.str());
                return 0;
            };
        });
    }

    // ---------------- sweep ----------------
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweeps");
    sweep->require_subcommand(1);
    {
        auto* gv = sweep->add_subcommand("gap-vs-size", "gap statistics on growing chains");
        auto flags = std::make_shared<ModelFlags>();
        auto d = std::make_shared<int>(2);
        auto sizes = std::make_shared<std::string>();
        auto trials = std::make_shared<int>(10);
        auto tau = std::make_shared<double>(-1.0);
        auto workers = std::make_shared<int>(1);
        auto seed = std::make_shared<SeedFlag>();
        auto out = std::make_shared<std::string>();
        auto summary_out = std::make_shared<std::string>();
        flags->attach(gv);
        gv->add_option("--d", *d);
        gv->add_option("--sizes", *sizes, "site counts, e.g. 4,6,8,10")->required();
        gv->add_option("--trials", *trials)->required();
        gv->add_option("--tau", *tau, "degeneracy tolerance (default auto)");
        gv->add_option("--workers", *workers);
        gv->add_option("--seed", seed->raw, "integer or 'random'")->required();
        gv->add_option("--out", *out)->required();
        gv->add_option("--summary-out", *summary_out, "per-size quantiles CSV");
        gv->callback([=, &pending] {
            pending.action = [=] {
                const std::uint64_t s = seed->resolve();
                const auto size_grid = parse_ints(*sizes);
                const std::optional<double> t =
                    *tau >= 0.0 ? std::optional<double>(*tau) : std::nullopt;
                auto [rows, summaries] =
                    gap_vs_size_sweep(flags->build(*d), *d, size_grid, *trials, t, s, *workers);
                FileMeta meta;
                meta.subcommand = "sweep gap-vs-size";
                meta.config = flags->describe() + " d=" + std::to_string(*d) +
                              " sizes=" + *sizes + " trials=" + std::to_string(*trials) +
                              " tau=" + (t ? format_double(*t) : std::string("auto"));
                meta.seed = std::to_string(s);
                std::ostringstream csv;
                csv << csv_header(meta);
                csv << "N,trial,gap,degeneracy,converged\n";
                for (const auto& r : rows)
                    csv << r.sites << "," << r.trial << ","
                        << (r.converged ? format_double(r.gap) : std::string("nan")) << ","
                        << r.degeneracy << "," << bool_str(r.converged) << "\n";
                write_file(*out, csv.str());
                if (!summary_out->empty()) {
                    std::ostringstream sc;
                    sc << csv_header(meta);
                    sc << "N,q25,median,q75,failures\n";
                    for (const auto& su : summaries)
                        sc << su.sites << "," << format_double(su.q25) << ","
                           << format_double(su.median) << "," << format_double(su.q75) << ","
                           << su.failures << "\n";
                    write_file(*summary_out, sc.str());
                }
                return 0;
            };
        });
    }

    // ---------------- scaling ----------------
    auto* scaling = app.add_subcommand("scaling", "the paper's closed-form scaling arithmetic");
    scaling->require_subcommand(1);
    {
        auto* ex = scaling->add_subcommand("exponent", "1 / (z d^4 + 4) and N(eps)");
        auto z = std::make_shared<int>(2);
        auto d = std::make_shared<int>(2);
        auto eps = std::make_shared<double>(0.0);
        ex->add_option("--z", *z)->required();
        ex->add_option("--d", *d)->required();
        ex->add_option("--eps", *eps, "also print the system size for this gap");
        ex->callback([=, &pending] {
            pending.action = [=] {
                const long denom = gap_scaling_denominator(*z, *d);
                std::cout << "1/" << denom << " ≈ " << format_double(gap_scaling_exponent(*z, *d))
                          << "\n";
                if (*eps > 0.0)
                    std::cout << "N(" << format_double(*eps)
                              << ") ≈ " << format_double(expected_system_size(*eps, *z, *d))
                              << "\n";
                return 0;
            };
        });
    }

}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"gaplab: spectra, rare-region plants and scaling experiments for random "
                 "local Hamiltonians"};
    app.set_config("--config", "", "read defaults from a TOML-style config file");
    app.require_subcommand(1);

    Pending pending;
    wire(app, pending);

    try {
        app.parse(argc, argv);
        return pending.action ? pending.action() : 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace gaplab::cli

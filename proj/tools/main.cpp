// Command-line front end: property-suite verification, tradeoff curves,
// fixed-state reports, dilation round-trip checks and a worked qubit example.
//
// Exit codes: 0 = all checks passed, 1 = a mathematical violation was
// detected, 2 = invalid configuration or malformed input.

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qid/json_io.hpp"
#include "qid/qid.hpp"

namespace {

using namespace qid;

constexpr const char* kVersion = "0.1.0";
constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kBadInput = 2;

struct RunConfig {
    std::size_t dim = 2;
    std::size_t trials = 1000;
    std::uint64_t seed = 42;
    double tol = 1e-9;
    std::string input_path;
    std::string output_path;
    std::string format = "text";
    bool stamp = false;
};

struct SuiteResult {
    std::string name;
    std::size_t samples;
    double max_violation; // suite passes iff max_violation <= threshold
    double threshold;
    bool pass() const { return max_violation <= threshold; }
};

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

KrausInstrument draw_instrument(std::size_t dim, Rng& rng, std::size_t max_total_kraus = 4) {
    const std::size_t n_out = 1 + rng.uniform_index(std::min<std::size_t>(4, max_total_kraus));
    const std::size_t kpo = 1 + rng.uniform_index(max_total_kraus / n_out);
    return random_instrument(dim, n_out, kpo, rng);
}

KrausInstrument draw_informative_instrument(std::size_t dim, Rng& rng,
                                            std::size_t max_total_kraus = 4) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        KrausInstrument instr = draw_instrument(dim, rng, max_total_kraus);
        if (is_informative(effects_of(instr))) return instr;
    }
    throw Error("could not draw an informative instrument");
}

SuiteResult suite_eq5_infodist(const RunConfig& cfg) {
    double worst = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(cfg.seed, 1, t));
        auto instr = draw_instrument(cfg.dim, rng);
        auto rho = random_density(cfg.dim, 1 + rng.uniform_index(cfg.dim), rng);
        worst = std::max(worst, -infodist_check(instr, rho).slack);
    }
    return {"eq5_infodist", cfg.trials, worst, 1e-9};
}

SuiteResult suite_eq3_increase(const RunConfig& cfg) {
    double worst = -1.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(cfg.seed, 2, t));
        auto instr = draw_informative_instrument(cfg.dim, rng);
        auto w = fidelity_increase_search(instr, 4, derive_seed(cfg.seed, 102, t));
        worst = std::max(worst, 1e-6 - w.increase);
    }
    return {"eq3_fidelity_increase", cfg.trials, worst, 0.0};
}

SuiteResult suite_unitary_equality(const RunConfig& cfg) {
    double worst = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(cfg.seed, 3, t));
        auto instr = KrausInstrument::fine_grained(cfg.dim, {random_unitary(cfg.dim, rng)});
        auto a = random_pure(cfg.dim, rng).projector();
        auto b = random_pure(cfg.dim, rng).projector();
        auto [fin, fout] = monotonicity_check(instr, a, b, 0);
        worst = std::max(worst, std::abs(fout - fin));
    }
    return {"eq3_unitary_equality", cfg.trials, worst, 1e-9};
}

// Some-outcome monotonicity: for every pair there is an outcome whose
// conditional outputs are at least as close as the inputs.
SuiteResult suite_monotonicity(const RunConfig& cfg) {
    double worst = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(cfg.seed, 4, t));
        auto instr = draw_instrument(cfg.dim, rng);
        auto a = random_density(cfg.dim, 1 + rng.uniform_index(cfg.dim), rng);
        auto b = random_density(cfg.dim, 1 + rng.uniform_index(cfg.dim), rng);
        double fin = 0.0;
        double best_fout = -1.0;
        for (std::size_t k = 0; k < instr.n_outcomes(); ++k) {
            if (outcome_probability(instr, a, k) <= 1e-9) continue;
            if (outcome_probability(instr, b, k) <= 1e-9) continue;
            auto [fi, fo] = monotonicity_check(instr, a, b, k);
            fin = fi;
            best_fout = std::max(best_fout, fo);
        }
        if (best_fout < 0.0) continue;
        worst = std::max(worst, fin - best_fout);
    }
    return {"fidelity_monotonicity_some_k", cfg.trials, worst, 1e-9};
}

SuiteResult suite_no_signaling(const RunConfig& cfg) {
    double worst = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(cfg.seed, 5, t));
        const std::size_t da = 2 + rng.uniform_index(2);
        std::vector<std::vector<std::size_t>> part(da);
        for (std::size_t a = 0; a < da; ++a) part[a] = {a};
        IndirectModel model(cfg.dim, da, kron(random_unitary(cfg.dim, rng), random_unitary(da, rng)),
                            PureState::basis(da, 0), std::move(part));
        auto s1 = ancilla_output(model, random_pure(cfg.dim, rng).projector());
        auto s2 = ancilla_output(model, random_pure(cfg.dim, rng).projector());
        worst = std::max(worst, 1.0 - fidelity(s1, s2));
    }
    return {"no_signaling_factorized", cfg.trials, worst, 1e-9};
}

SuiteResult suite_signaling_converse(const RunConfig& cfg) {
    double worst = -1.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(cfg.seed, 6, t));
        auto instr = draw_informative_instrument(cfg.dim, rng, 3);
        auto w = signaling_witness(dilate(instr), 8, derive_seed(cfg.seed, 106, t));
        worst = std::max(worst, w.fidelity - (1.0 - 1e-6));
    }
    return {"signaling_converse", cfg.trials, worst, 0.0};
}

SuiteResult suite_entropy_inequalities(const RunConfig&) {
    auto rep = entropy_inequality_suite(10000);
    return {"entropy_inequalities", 10000, rep.max_violation(), 1e-12};
}

std::pair<SuiteResult, SuiteResult> suite_dilation_roundtrip(const RunConfig& cfg) {
    double worst_state = 0.0;
    double worst_prob = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(cfg.seed, 7, t));
        auto instr = draw_instrument(cfg.dim, rng);
        auto model = dilate(instr);
        auto rho = random_density(cfg.dim, 1 + rng.uniform_index(cfg.dim), rng);
        for (std::size_t k = 0; k < instr.n_outcomes(); ++k) {
            const double p = outcome_probability(instr, rho, k);
            worst_prob = std::max(worst_prob, std::abs(p - outcome_probability(model, rho, k)));
            if (p <= 1e-6) continue;
            worst_state = std::max(worst_state,
                                   trace_distance(conditional_from_model(model, rho, k),
                                                  conditional_output(instr, rho, k)));
        }
    }
    return {{"dilation_roundtrip_state", cfg.trials, worst_state, 1e-9},
            {"dilation_roundtrip_prob", cfg.trials, worst_prob, 1e-10}};
}

SuiteResult suite_fuchs_van_de_graaf(const RunConfig& cfg) {
    double worst = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(cfg.seed, 8, t));
        auto a = random_density(cfg.dim, 1 + rng.uniform_index(cfg.dim), rng);
        auto b = random_density(cfg.dim, 1 + rng.uniform_index(cfg.dim), rng);
        const double bound = std::sqrt(std::max(0.0, 1.0 - fidelity(a, b)));
        worst = std::max(worst, trace_distance(a, b) - bound);
    }
    return {"fuchs_van_de_graaf", cfg.trials, worst, 1e-8};
}

SuiteResult suite_pure_consistency(const RunConfig& cfg) {
    double worst = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(cfg.seed, 9, t));
        auto a = random_pure(cfg.dim, rng);
        auto b = random_pure(cfg.dim, rng);
        const double ov = pure_overlap(a, b);
        worst = std::max(worst, std::abs(fidelity(a.projector(), b.projector()) - ov * ov));
    }
    return {"fidelity_overlap_consistency", cfg.trials, worst, 1e-8};
}

// Brute-force Helstrom check: scan rank-1 qubit projectors over a Bloch-angle
// grid and compare the best projective error with the closed formula.
SuiteResult suite_helstrom_grid(const RunConfig& cfg) {
    const std::size_t samples = std::min<std::size_t>(cfg.trials, 100);
    constexpr int kGrid = 100; // kGrid^2 = 1e4 angle points
    double worst = 0.0;
    for (std::size_t t = 0; t < samples; ++t) {
        Rng rng(derive_seed(cfg.seed, 10, t));
        auto r1 = random_density(2, 1 + rng.uniform_index(2), rng);
        auto r2 = random_density(2, 1 + rng.uniform_index(2), rng);
        const ComplexMatrix delta = r1.mat() - r2.mat();
        const double ax = delta(1, 0).real();
        const double ay = delta(1, 0).imag();
        const double az = delta(0, 0).real();
        double best = 0.5;
        for (int i = 0; i < kGrid; ++i) {
            const double theta = 3.14159265358979323846 * i / (kGrid - 1);
            for (int j = 0; j < kGrid; ++j) {
                const double phi = 2.0 * 3.14159265358979323846 * j / kGrid;
                const double n_dot_a = std::sin(theta) * std::cos(phi) * ax +
                                       std::sin(theta) * std::sin(phi) * ay +
                                       std::cos(theta) * az;
                best = std::min(best, 0.5 - 0.5 * std::abs(n_dot_a));
            }
        }
        worst = std::max(worst, std::abs(best - helstrom_error(r1, r2).p_error));
    }
    return {"helstrom_bruteforce_d2", samples, worst, 1e-3};
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

int cmd_verify(const RunConfig& cfg) {
    std::vector<SuiteResult> suites;
    suites.push_back(suite_eq5_infodist(cfg));
    suites.push_back(suite_eq3_increase(cfg));
    suites.push_back(suite_unitary_equality(cfg));
    suites.push_back(suite_monotonicity(cfg));
    suites.push_back(suite_no_signaling(cfg));
    suites.push_back(suite_signaling_converse(cfg));
    suites.push_back(suite_entropy_inequalities(cfg));
    auto [rt_state, rt_prob] = suite_dilation_roundtrip(cfg);
    suites.push_back(rt_state);
    suites.push_back(rt_prob);
    suites.push_back(suite_fuchs_van_de_graaf(cfg));
    suites.push_back(suite_pure_consistency(cfg));
    suites.push_back(suite_helstrom_grid(cfg));

    const bool all_pass =
        std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass(); });

    nlohmann::json report;
    report["version"] = kVersion;
    report["command"] = "verify";
    report["dim"] = cfg.dim;
    report["trials"] = cfg.trials;
    report["seed"] = cfg.seed;
    report["tol"] = cfg.tol;
    if (cfg.stamp) report["timestamp"] = static_cast<long long>(std::time(nullptr));
    nlohmann::json js = nlohmann::json::array();
    for (const auto& s : suites)
        js.push_back({{"name", s.name},
                      {"samples", s.samples},
                      {"max_violation", s.max_violation},
                      {"threshold", s.threshold},
                      {"pass", s.pass()}});
    report["suites"] = std::move(js);
    report["all_pass"] = all_pass;

    if (cfg.format == "json") {
        std::cout << report.dump(2) << "\n";
    } else {
        std::printf("%-30s %8s %15s %10s  %s\n", "suite", "samples", "max violation",
                    "threshold", "status");
        for (const auto& s : suites)
            std::printf("%-30s %8zu %15.6e %10.1e  %s\n", s.name.c_str(), s.samples,
                        s.max_violation, s.threshold, s.pass() ? "pass" : "FAIL");
        std::printf("overall: %s\n", all_pass ? "pass" : "FAIL");
    }
    if (!cfg.output_path.empty()) {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write report to " << cfg.output_path << "\n";
            return kBadInput;
        }
        out << report.dump(2) << "\n";
    }
    return all_pass ? kOk : kViolation;
}

int cmd_curve(const RunConfig& cfg) {
    DensityMatrix input = cfg.input_path.empty()
                              ? PureState::normalized({1.0, 1.0}).projector()
                              : load_density_file(cfg.input_path, cfg.tol);
    auto points = saturation_scan(std::max<std::size_t>(cfg.trials, 3), input);
    if (cfg.output_path.empty()) {
        write_scan_csv(std::cout, points);
    } else {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write CSV to " << cfg.output_path << "\n";
            return kBadInput;
        }
        write_scan_csv(out, points);
    }
    return kOk;
}

void print_state(const PureState& s) {
    std::printf("[");
    for (std::size_t i = 0; i < s.dim(); ++i)
        std::printf("%s%.6g%+.6gi", i ? ", " : "", s[i].real(), s[i].imag());
    std::printf("]\n");
}

int cmd_fixed_states(const RunConfig& cfg) {
    auto instr = load_instrument_file(cfg.input_path, cfg.tol);
    for (std::size_t k = 0; k < instr.n_outcomes(); ++k) {
        auto states = unmodified_pure_states(instr, k, cfg.tol);
        std::printf("outcome %zu: ", k);
        if (states.empty()) {
            std::printf("none found\n");
            continue;
        }
        std::printf("%zu unmodified pure state(s)\n", states.size());
        for (const auto& s : states) {
            std::printf("  ");
            print_state(s);
        }
    }
    return kOk;
}

int cmd_dilate(const RunConfig& cfg) {
    auto instr = load_instrument_file(cfg.input_path, cfg.tol);
    auto model = dilate(instr);
    const std::size_t n = model.dim_sys() * model.dim_anc();
    const double unitarity =
        max_abs_diff(model.unitary().adjoint() * model.unitary(), ComplexMatrix::identity(n));

    double worst_state = 0.0;
    double worst_prob = 0.0;
    for (std::size_t t = 0; t < 100; ++t) {
        Rng rng(derive_seed(cfg.seed, 20, t));
        auto rho = random_density(instr.dim(), 1 + rng.uniform_index(instr.dim()), rng);
        for (std::size_t k = 0; k < instr.n_outcomes(); ++k) {
            const double p = outcome_probability(instr, rho, k);
            worst_prob = std::max(worst_prob, std::abs(p - outcome_probability(model, rho, k)));
            if (p <= 1e-6) continue;
            worst_state = std::max(worst_state,
                                   trace_distance(conditional_from_model(model, rho, k),
                                                  conditional_output(instr, rho, k)));
        }
    }
    std::printf("ancilla dimension: %zu\n", model.dim_anc());
    std::printf("unitarity residual: %.6e\n", unitarity);
    std::printf("max state discrepancy over 100 random inputs: %.6e\n", worst_state);
    std::printf("max probability discrepancy: %.6e\n", worst_prob);
    const bool ok = worst_state < cfg.tol;
    std::printf("round trip %s (tolerance %.1e)\n", ok ? "ok" : "FAILED", cfg.tol);
    return ok ? kOk : kViolation;
}

void print_matrix(const ComplexMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::printf("    [");
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const cplx z = m(i, j);
            if (std::abs(z.imag()) < 1e-12) std::printf("%s%.6g", j ? ", " : "", z.real());
            else std::printf("%s%.6g%+.6gi", j ? ", " : "", z.real(), z.imag());
        }
        std::printf("]\n");
    }
}

int cmd_demo() {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix k0(2, 2), k1(2, 2);
    k0(0, 0) = s;
    k0(1, 0) = s; // |+><0|
    k1(0, 1) = s;
    k1(1, 1) = s; // |+><1|
    auto instr = KrausInstrument::fine_grained(2, {k0, k1});

    std::printf("Qubit instrument with K0 = |+><0| and K1 = |+><1|:\n");
    std::printf("it measures in the computational basis yet always outputs |+>.\n\n");

    auto povm = effects_of(instr);
    std::printf("effects (computational-basis POVM):\n");
    for (std::size_t k = 0; k < 2; ++k) {
        std::printf("  Pi_%zu =\n", k);
        print_matrix(povm.effect(k));
    }

    auto zero = PureState::basis(2, 0).projector();
    auto one = PureState::basis(2, 1).projector();
    std::printf("\ninput |0><0|: p(0) = %.6g, p(1) = %.6g\n",
                outcome_probability(instr, zero, 0), outcome_probability(instr, zero, 1));
    std::printf("conditional output for outcome 0 on |0><0|:\n");
    print_matrix(conditional_output(instr, zero, 0).mat());
    std::printf("conditional output for outcome 1 on |1><1|:\n");
    print_matrix(conditional_output(instr, one, 1).mat());
    std::printf("both branches produce |+><+| for every input.\n");

    auto rec = infodist_check(instr, zero);
    std::printf("\ntradeoff for input |0><0| (output is |+><+|):\n");
    std::printf("  F(rho, rho')      = %.6g\n", rec.fid_in_out);
    std::printf("  disturbance 1 - F = %.6g\n", rec.disturbance);
    std::printf("  p_e (Helstrom)    = %.6g\n", rec.p_e_opt);
    std::printf("  H2(p_e)           = %.6g\n", rec.entropy);
    std::printf("  info 1 - H2       = %.6g\n", rec.info);
    std::printf("  bound F <= H2(p_e): %.6g <= %.6g  -> %s\n", rec.fid_in_out, rec.entropy,
                rec.holds ? "holds" : "VIOLATED");
    return rec.holds ? kOk : kViolation;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, bool with_scale = true) {
    if (with_scale) {
        cmd->add_option("--dim", cfg.dim, "Hilbert-space dimension");
        cmd->add_option("--trials", cfg.trials, "number of samples / grid points");
        cmd->add_option("--seed", cfg.seed, "random seed");
    }
    cmd->add_option("--tol", cfg.tol, "numerical tolerance");
    cmd->add_option("--in", cfg.input_path, "input JSON path");
    cmd->add_option("--out", cfg.output_path, "output file path");
    cmd->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_flag("--stamp", cfg.stamp, "embed a timestamp in reports");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"general quantum measurements and the information-disturbance tradeoff"};
    app.require_subcommand(1);

    RunConfig cfg;
    CLI::App* verify = app.add_subcommand("verify", "run the property-suite checks");
    add_common_options(verify, cfg);
    CLI::App* curve = app.add_subcommand("curve", "emit the measurement-strength tradeoff CSV");
    add_common_options(curve, cfg);
    CLI::App* fixed = app.add_subcommand("fixed-states", "report unmodified pure states");
    add_common_options(fixed, cfg);
    CLI::App* dil = app.add_subcommand("dilate", "build and test an indirect-model dilation");
    add_common_options(dil, cfg);
    app.add_subcommand("demo", "reproduce the worked qubit example");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kBadInput;
    }

    if (cfg.trials < 1 || cfg.dim < 2 || !(cfg.tol > 0.0)) {
        std::cerr << "invalid configuration: need trials >= 1, dim >= 2, tol > 0\n";
        return kBadInput;
    }
    if (verify->parsed() && cfg.format == "csv") {
        std::cerr << "verify supports --format text|json\n";
        return kBadInput;
    }
    if ((fixed->parsed() || dil->parsed()) && cfg.input_path.empty()) {
        std::cerr << "this command needs --in <instrument.json>\n";
        return kBadInput;
    }

    try {
        if (verify->parsed()) return cmd_verify(cfg);
        if (curve->parsed()) return cmd_curve(cfg);
        if (fixed->parsed()) return cmd_fixed_states(cfg);
        if (dil->parsed()) return cmd_dilate(cfg);
        return cmd_demo();
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kBadInput;
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kBadInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
}

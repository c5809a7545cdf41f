// Acceptance suite: end-to-end checks of the library's headline guarantees,
// one pass/fail line per criterion. Exit code 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "qid/json_io.hpp"
#include "qid/qid.hpp"

using namespace qid;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

KrausInstrument plus_repreparing_instrument() {
    ComplexMatrix k0(2, 2), k1(2, 2);
    k0(0, 0) = kInvSqrt2;
    k0(1, 0) = kInvSqrt2;
    k1(0, 1) = kInvSqrt2;
    k1(1, 1) = kInvSqrt2;
    return KrausInstrument::fine_grained(2, {k0, k1});
}

KrausInstrument draw_instrument(std::size_t dim, Rng& rng, std::size_t max_total = 4) {
    const std::size_t n_out = 1 + rng.uniform_index(std::min<std::size_t>(4, max_total));
    const std::size_t kpo = 1 + rng.uniform_index(max_total / n_out);
    return random_instrument(dim, n_out, kpo, rng);
}

int run_cli(const std::string& args, const std::string& stdout_file) {
    std::string cmd = std::string(QID_CLI_PATH) + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file;
    cmd += " 2> acc_stderr.txt";
    const int rc = std::system(cmd.c_str());
    if (rc == -1 || !WIFEXITED(rc)) return -1;
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 1. Bound universality: 1 - F(rho, rho') >= 1 - H2(p_e) over >= 1e4 random
//    instrument/state pairs, dims 2-4, ranks 1-d, <= 4 Kraus, <= 4 outcomes.
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_slack = 1.0;
    std::size_t count = 0;
    for (std::size_t dim = 2; dim <= 4; ++dim) {
        for (std::size_t t = 0; t < 3500; ++t) {
            Rng rng(derive_seed(42, 1000 + dim, t));
            auto instr = draw_instrument(dim, rng);
            auto rho = random_density(dim, 1 + rng.uniform_index(dim), rng);
            worst_slack = std::min(worst_slack, infodist_check(instr, rho).slack);
            ++count;
        }
    }
    const double el = seconds_since(t0);
    report(1,
           count >= 10000 && worst_slack >= -1e-9 && el <= 60.0,
           fmt("bound suite: %zu pairs, worst slack %.3e (>= -1e-9), %.1f s", count, worst_slack,
               el));
}

// 2. Fidelity increase: every informative instrument shows a strictly
//    increasing pair (> 1e-6); unitary instruments preserve fidelity (< 1e-9).
void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    double min_increase = 1.0;
    for (std::size_t t = 0; t < 500; ++t) {
        const std::size_t dim = 2 + t % 3;
        KrausInstrument instr = [&] {
            for (int attempt = 0;; ++attempt) {
                Rng rng(derive_seed(42, 2000 + attempt, t));
                auto cand = draw_instrument(dim, rng);
                if (is_informative(effects_of(cand))) return cand;
            }
        }();
        auto w = fidelity_increase_search(instr, 4, derive_seed(42, 2100, t));
        min_increase = std::min(min_increase, w.increase);
    }
    double max_unitary_dev = 0.0;
    for (std::size_t t = 0; t < 100; ++t) {
        Rng rng(derive_seed(42, 2200, t));
        const std::size_t dim = 2 + t % 3;
        auto instr = KrausInstrument::fine_grained(dim, {random_unitary(dim, rng)});
        auto a = random_density(dim, 1 + rng.uniform_index(dim), rng);
        auto b = random_density(dim, 1 + rng.uniform_index(dim), rng);
        auto [fin, fout] = monotonicity_check(instr, a, b, 0);
        max_unitary_dev = std::max(max_unitary_dev, std::abs(fout - fin));
    }
    const double el = seconds_since(t0);
    report(2,
           min_increase > 1e-6 && max_unitary_dev < 1e-9 && el <= 60.0,
           fmt("500 informative: min increase %.3e (> 1e-6); 100 unitary: max |dF| %.3e "
               "(< 1e-9), %.1f s",
               min_increase, max_unitary_dev, el));
}

// 3. Worked example: effects, conditional outputs, F, p_e, H2 and the bound.
void criterion_3() {
    auto instr = plus_repreparing_instrument();
    auto povm = effects_of(instr);
    const double eff_dev =
        std::max(max_abs_diff(povm.effect(0), PureState::basis(2, 0).projector_matrix()),
                 max_abs_diff(povm.effect(1), PureState::basis(2, 1).projector_matrix()));

    const DensityMatrix plus = PureState::normalized({kInvSqrt2, kInvSqrt2}).projector();
    const DensityMatrix zero = PureState::basis(2, 0).projector();
    const DensityMatrix one = PureState::basis(2, 1).projector();
    const double cond_dev =
        std::max({trace_distance(conditional_output(instr, zero, 0), plus),
                  trace_distance(conditional_output(instr, one, 1), plus),
                  trace_distance(conditional_output(instr, plus, 0), plus),
                  trace_distance(conditional_output(instr, plus, 1), plus)});

    auto rec = infodist_check(instr, zero);
    const double pe_expected = (1.0 - kInvSqrt2) / 2.0;
    const bool f_ok = std::abs(rec.fid_in_out - 0.5) <= 1e-10;
    const bool pe_ok = std::abs(rec.p_e_opt - pe_expected) <= 1e-10;
    const bool h2_ok = std::abs(rec.entropy - 0.60098) <= 1e-4;
    const int demo_rc = run_cli("demo", "acc_demo.txt");
    const std::string demo_out = slurp("acc_demo.txt");
    const bool demo_ok = demo_rc == 0 && demo_out.find("holds") != std::string::npos;

    const bool ok = eff_dev <= 1e-12 && cond_dev <= 1e-10 && f_ok && pe_ok && h2_ok &&
                    rec.holds && demo_ok;
    report(3, ok,
           fmt("worked example: effects dev %.1e, cond dev %.1e, F %.12f, p_e %.12f, "
               "H2 %.12f vs 0.60098 +- 1e-4 (|diff| %.3e -> %s), bound %s, demo rc %d",
               eff_dev, cond_dev, rec.fid_in_out, rec.p_e_opt, rec.entropy,
               std::abs(rec.entropy - 0.60098), h2_ok ? "ok" : "OUT", rec.holds ? "holds" : "broken",
               demo_rc));
}

// 4. Dilation round trip on 500 random instruments.
void criterion_4() {
    double worst_state = 0.0;
    double worst_prob = 0.0;
    for (std::size_t t = 0; t < 500; ++t) {
        Rng rng(derive_seed(42, 4000, t));
        const std::size_t dim = 2 + t % 2;
        auto instr = draw_instrument(dim, rng);
        auto model = dilate(instr);
        auto rho = random_density(dim, 1 + rng.uniform_index(dim), rng);
        for (std::size_t k = 0; k < instr.n_outcomes(); ++k) {
            const double p = outcome_probability(instr, rho, k);
            worst_prob = std::max(worst_prob, std::abs(p - outcome_probability(model, rho, k)));
            if (p <= 1e-6) continue;
            worst_state = std::max(worst_state,
                                   trace_distance(conditional_from_model(model, rho, k),
                                                  conditional_output(instr, rho, k)));
        }
    }
    report(4, worst_state <= 1e-9 && worst_prob <= 1e-10,
           fmt("dilation round trip: 500 instruments, state dev %.3e (<= 1e-9), "
               "probability dev %.3e (<= 1e-10)",
               worst_state, worst_prob));
}

// 5. Entropy inequality kit on 1e4-point grids, equalities at p = 0, 1/2, 1.
void criterion_5() {
    auto rep = entropy_inequality_suite(10000);
    double eq_dev = 0.0;
    for (double p : {0.0, 0.5, 1.0})
        eq_dev = std::max(eq_dev, std::abs(4.0 * p * (1.0 - p) - binary_entropy(p)));
    eq_dev = std::max(eq_dev, std::abs(1.0 - binary_entropy(0.5))); // x=1 in (b)
    report(5, rep.max_violation() <= 1e-12 && eq_dev <= 1e-12,
           fmt("entropy inequalities: max violation %.3e (<= 1e-12), endpoint equality dev %.3e",
               rep.max_violation(), eq_dev));
}

// 6. Signaling converse and no-signaling.
void criterion_6() {
    double worst_witness = 0.0; // max over instruments of the witness fidelity
    for (std::size_t t = 0; t < 100; ++t) {
        const std::size_t dim = 2 + t % 2;
        KrausInstrument instr = [&] {
            for (int attempt = 0;; ++attempt) {
                Rng rng(derive_seed(42, 6000 + attempt, t));
                auto cand = draw_instrument(dim, rng, 3);
                if (is_informative(effects_of(cand))) return cand;
            }
        }();
        auto w = signaling_witness(dilate(instr), 10, derive_seed(42, 6100, t));
        worst_witness = std::max(worst_witness, w.fidelity);
    }
    double worst_factorized = 1.0; // min fidelity across factorized models
    for (std::size_t t = 0; t < 100; ++t) {
        Rng rng(derive_seed(42, 6200, t));
        const std::size_t ds = 2 + t % 2;
        const std::size_t da = 2 + (t / 2) % 2;
        std::vector<std::vector<std::size_t>> part(da);
        for (std::size_t a = 0; a < da; ++a) part[a] = {a};
        IndirectModel model(ds, da, kron(random_unitary(ds, rng), random_unitary(da, rng)),
                            PureState::basis(da, 0), std::move(part));
        auto s1 = ancilla_output(model, random_pure(ds, rng).projector());
        auto s2 = ancilla_output(model, random_pure(ds, rng).projector());
        worst_factorized = std::min(worst_factorized, fidelity(s1, s2));
    }
    report(6, worst_witness < 1.0 - 1e-6 && worst_factorized >= 1.0 - 1e-9,
           fmt("signaling: 100 dilated informative, max witness F %.6f (< 1 - 1e-6); "
               "100 factorized, min F %.12f (>= 1 - 1e-9)",
               worst_witness, worst_factorized));
}

// 7. Metric layer: Fuchs - van de Graaf, overlap consistency, Helstrom grid.
void criterion_7() {
    double worst_fvg = 0.0;
    double worst_ov = 0.0;
    for (std::size_t t = 0; t < 10000; ++t) {
        Rng rng(derive_seed(42, 7000, t));
        const std::size_t d = 2 + t % 3;
        auto a = random_density(d, 1 + rng.uniform_index(d), rng);
        auto b = random_density(d, 1 + rng.uniform_index(d), rng);
        const double f = fidelity(a, b);
        worst_fvg = std::max(worst_fvg, trace_distance(a, b) - std::sqrt(std::max(0.0, 1.0 - f)));
        auto pa = random_pure(d, rng);
        auto pb = random_pure(d, rng);
        const double ov = pure_overlap(pa, pb);
        worst_ov = std::max(worst_ov,
                            std::abs(fidelity(pa.projector(), pb.projector()) - ov * ov));
    }

    double worst_grid = 0.0;
    constexpr int kGrid = 100;
    for (std::size_t t = 0; t < 100; ++t) {
        Rng rng(derive_seed(42, 7100, t));
        auto r1 = random_density(2, 1 + rng.uniform_index(2), rng);
        auto r2 = random_density(2, 1 + rng.uniform_index(2), rng);
        const ComplexMatrix delta = r1.mat() - r2.mat();
        const double ax = delta(1, 0).real(), ay = delta(1, 0).imag(), az = delta(0, 0).real();
        double best = 0.5;
        for (int i = 0; i < kGrid; ++i) {
            const double theta = 3.14159265358979323846 * i / (kGrid - 1);
            for (int j = 0; j < kGrid; ++j) {
                const double phi = 2.0 * 3.14159265358979323846 * j / kGrid;
                const double nda = std::sin(theta) * std::cos(phi) * ax +
                                   std::sin(theta) * std::sin(phi) * ay + std::cos(theta) * az;
                best = std::min(best, 0.5 - 0.5 * std::abs(nda));
            }
        }
        worst_grid = std::max(worst_grid, std::abs(best - helstrom_error(r1, r2).p_error));
    }
    report(7, worst_fvg <= 1e-8 && worst_ov <= 1e-8 && worst_grid <= 1e-3,
           fmt("metric layer: FvdG dev %.3e (<= 1e-8), overlap dev %.3e (<= 1e-8), "
               "Helstrom grid dev %.3e (<= 1e-3)",
               worst_fvg, worst_ov, worst_grid));
}

// 8. Saturation scan endpoints and CSV byte stability.
void criterion_8() {
    const DensityMatrix plus = PureState::normalized({kInvSqrt2, kInvSqrt2}).projector();
    auto points = saturation_scan(21, plus);
    const double slack0 = points.front().record.slack;
    const double slack_half = points[10].record.slack;
    bool all_hold = true;
    for (const auto& fp : points) all_hold = all_hold && fp.record.holds;

    const int rc1 = run_cli("curve --trials 21 --seed 42 --out acc_curve_1.csv", "");
    const int rc2 = run_cli("curve --trials 21 --seed 42 --out acc_curve_2.csv", "");
    const std::string c1 = slurp("acc_curve_1.csv");
    const std::string c2 = slurp("acc_curve_2.csv");
    const bool csv_ok = rc1 == 0 && rc2 == 0 && !c1.empty() && c1 == c2;

    report(8, std::abs(slack0) <= 1e-9 && slack_half > 1e-4 && all_hold && csv_ok,
           fmt("saturation scan: slack(0) %.3e (|.| <= 1e-9), slack(0.5) %.6f (> 1e-4), "
               "all points hold %s, CSV byte-stable %s",
               slack0, slack_half, all_hold ? "yes" : "NO", csv_ok ? "yes" : "NO"));
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    std::printf("%d/8 criteria passed\n", 8 - g_failures);
    return g_failures == 0 ? 0 : 1;
}

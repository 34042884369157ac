// Command-line driver: verification suites, single-query evaluation and the
// exact counterexample reproductions, all reporting JSON.

#include "fibrate/json_io.hpp"
#include "fibrate/suites.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace fibrate;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("FIBRATE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw SchemaError("FIBRATE_SEED", "not an integer");
        }
    }
    return 0;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path, "cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path, std::string("invalid JSON: ") + e.what());
    }
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write " + out_path);
        out << j.dump(2) << "\n";
    }
}

Vector parse_point(const std::string& text) {
    std::stringstream ss(text);
    std::vector<double> values;
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            values.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw SchemaError("point", "component \"" + token + "\" is not a number");
        }
    }
    if (values.empty()) throw SchemaError("point", "empty");
    Vector v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
    const double n = v.norm();
    if (n < 1e-12) throw SchemaError("point", "zero vector");
    return v / n;
}

void print_human_report(const Report& report) {
    std::cout << "suite " << report.suite << " (seed " << report.seed << ")\n";
    for (const Check& c : report.checks) {
        const char* status = c.status == CheckStatus::pass   ? "pass"
                             : c.status == CheckStatus::fail ? "FAIL"
                                                             : "skip";
        std::cout << "  [" << status << "] " << c.name;
        if (c.status == CheckStatus::fail) std::cout << ": " << c.details;
        std::cout << "\n";
    }
    std::cout << report.checks.size() << " checks, " << report.failures() << " failures, "
              << report.elapsed_ms / 1000.0 << " s\n";
}

int run_verify(const std::string& suite, int trials, std::uint64_t seed, double tol,
               const std::string& json_path) {
    SuiteConfig cfg;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.tol = tol;
    const Report report = run_suite(suite, cfg);
    if (!json_path.empty())
        emit(report_to_json(report), json_path);
    else
        print_human_report(report);
    return report.all_passed() ? kExitOk : kExitCheckFailed;
}

int run_chart_n3() {
    const Matrix i2 = standard_complex_structure(1).matrix();
    auto blocks = [&](std::initializer_list<int> signs) {
        const auto n = static_cast<Eigen::Index>(signs.size());
        Matrix m = Matrix::Zero(2 * n, 2 * n);
        Eigen::Index b = 0;
        for (int s : signs) {
            m.block(2 * b, 2 * b, 2, 2) = static_cast<double>(s) * i2;
            ++b;
        }
        return ComplexStructure::validate(m);
    };
    const auto j = blocks({1, 1, 1});
    const auto k_same = blocks({1, 1, 1});
    const auto k_opp = blocks({-1, 1, 1});
    const auto same = agreement_space(j, k_same, AgreementMode::difference);
    const auto opp = agreement_space(j, k_opp, AgreementMode::difference);

    json out{{"schema", 1},
             {"same_sign",
              {{"J", matrix_to_json(j.matrix())},
               {"K", matrix_to_json(k_same.matrix())},
               {"kernel_dimension", same.dimension}}},
             {"opposite_sign",
              {{"J", matrix_to_json(j.matrix())},
               {"K", matrix_to_json(k_opp.matrix())},
               {"kernel_dimension", opp.dimension}}}};
    std::cout << out.dump(2) << "\n";
    const bool ok = same.dimension == 6 && opp.dimension == 4 && same.dimension > 2 &&
                    opp.dimension > 2;
    return ok ? kExitOk : kExitCheckFailed;
}

int run_nonuniqueness() {
    const QuatStructure q1 = standard_quaternionic(2);
    Matrix t = Matrix::Identity(8, 8);
    t.block(4, 4, 4, 4) = left_quaternion_i();
    const QuatStructure q2 = conjugate(q1, t);

    const Vector e1 = Vector::Unit(8, 0);
    const Vector e5 = Vector::Unit(8, 4);
    Vector mid = Vector::Zero(8);
    mid(0) = mid(4) = 1.0 / std::sqrt(2.0);

    auto agreement_name = [](FiberAgreement a) {
        return a == FiberAgreement::agree_oriented        ? "agree_oriented"
               : a == FiberAgreement::agree_unoriented_only ? "agree_unoriented_only"
                                                            : "disagree";
    };
    const auto at_p = fibers_agree(q1, q2, e1);
    const auto at_q = fibers_agree(q1, q2, e5);
    const auto at_r = fibers_agree(q1, q2, mid);
    json out{{"schema", 1},
             {"structures", {{"first", quat_structure_to_json(q1)},
                             {"second", quat_structure_to_json(q2)}}},
             {"shared_at_e1", agreement_name(at_p)},
             {"shared_at_e5", agreement_name(at_q)},
             {"midpoint", agreement_name(at_r)}};
    std::cout << out.dump(2) << "\n";
    const bool ok = at_p == FiberAgreement::agree_oriented &&
                    at_q == FiberAgreement::agree_oriented &&
                    at_r == FiberAgreement::disagree;
    return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"great-sphere fibration toolkit"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed_flag;
    int trials = 300;
    double tol = 1e-9;
    std::string json_path, out_path;

    // verify ------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run a module verification suite");
    std::string suite;
    verify->add_option("suite", suite, "exterior|grassmann|ocs|gcfib|quat|all")
        ->required()
        ->check(CLI::IsMember({"exterior", "grassmann", "ocs", "gcfib", "quat", "all"}));
    verify->add_option("--trials", trials, "trials per randomized check")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed_flag, "root seed (fallback: FIBRATE_SEED, then 0)");
    verify->add_option("--tol", tol, "generic tolerance")->check(CLI::PositiveNumber);
    verify->add_option("--json", json_path, "write the report JSON here");

    // ocs -----------------------------------------------------------------
    auto* ocs = app.add_subcommand("ocs", "orthogonal complex structure queries");
    ocs->require_subcommand(1);

    auto* ocs_random = ocs->add_subcommand("random", "sample a random structure");
    Eigen::Index ocs_n = 2;
    int ocs_sign = 1;
    ocs_random->add_option("--n", ocs_n, "half-dimension n of R^{2n}")
        ->check(CLI::PositiveNumber);
    ocs_random->add_option("--sign", ocs_sign, "+1 or -1")->check(CLI::IsMember({1, -1}));
    ocs_random->add_option("--seed", seed_flag, "seed");
    ocs_random->add_option("-o,--output", out_path, "write the structure JSON here");

    auto* ocs_sign_cmd = ocs->add_subcommand("sign", "sign of a structure");
    std::string file_a, file_b;
    ocs_sign_cmd->add_option("structure", file_a, "structure JSON file")->required();

    auto* ocs_agree = ocs->add_subcommand("agree", "agreement kernel of two structures");
    std::string agree_mode = "difference";
    ocs_agree->add_option("first", file_a, "first structure JSON")->required();
    ocs_agree->add_option("second", file_b, "second structure JSON")->required();
    ocs_agree->add_option("--mode", agree_mode, "difference|sum")
        ->check(CLI::IsMember({"difference", "sum"}));
    ocs_agree->add_option("-o,--output", out_path, "write the result JSON here");

    auto* ocs_pair = ocs->add_subcommand("pair-bases", "paired bases of two structures");
    std::string point_text;
    ocs_pair->add_option("first", file_a, "first structure JSON")->required();
    ocs_pair->add_option("second", file_b, "second structure JSON")->required();
    ocs_pair->add_option("--point", point_text, "comma-separated anchor point (default e1)");
    ocs_pair->add_option("-o,--output", out_path, "write the result JSON here");

    // fib -----------------------------------------------------------------
    auto* fib = app.add_subcommand("fib", "great-circle fibration queries");
    fib->require_subcommand(1);

    auto* fib_lookup = fib->add_subcommand("lookup", "fiber plane through a point");
    std::string spec_path;
    double eps = 1e-12;
    int max_iter = 10000;
    fib_lookup->add_option("--spec", spec_path, "fibration JSON file")->required();
    fib_lookup->add_option("--point", point_text, "comma-separated point on S^3")->required();
    fib_lookup->add_option("--eps", eps, "fixed-point tolerance");
    fib_lookup->add_option("--max-iter", max_iter, "iteration cap")->check(CLI::PositiveNumber);
    fib_lookup->add_option("-o,--output", out_path, "write the plane JSON here");

    auto* fib_check = fib->add_subcommand("check", "verify the fibration axioms");
    int samples = 50;
    fib_check->add_option("--spec", spec_path, "fibration JSON file")->required();
    fib_check->add_option("--samples", samples, "sample count")->check(CLI::PositiveNumber);
    fib_check->add_option("--seed", seed_flag, "seed");
    fib_check->add_option("--json", json_path, "write the report JSON here");

    auto* fib_sign = fib->add_subcommand("sign", "sign of a fibration");
    fib_sign->add_option("--spec", spec_path, "fibration JSON file")->required();
    fib_sign->add_option("--seed", seed_flag, "seed");

    // quat ----------------------------------------------------------------
    auto* quat = app.add_subcommand("quat", "quaternionic structure queries");
    quat->require_subcommand(1);

    auto* quat_ce = quat->add_subcommand("counterexample",
                                         "verify the shared-3-sphere nonexistence pair");
    quat_ce->add_option("--json", json_path, "write the report JSON here");

    auto* quat_agree = quat->add_subcommand("agree", "compare fiber 4-spaces at a point");
    quat_agree->add_option("first", file_a, "first structure JSON")->required();
    quat_agree->add_option("second", file_b, "second structure JSON")->required();
    quat_agree->add_option("--point", point_text, "comma-separated point (default e1)");

    auto* quat_sign_cmd = quat->add_subcommand("sign", "sign of a quaternionic structure");
    quat_sign_cmd->add_option("structure", file_a, "structure JSON file")->required();

    // counterexample --------------------------------------------------------
    auto* ce = app.add_subcommand("counterexample", "reproduce a pinned counterexample");
    std::string which;
    ce->add_option("which", which, "s7-nonexistence|s7-nonuniqueness|chart-n3")
        ->required()
        ->check(CLI::IsMember({"s7-nonexistence", "s7-nonuniqueness", "chart-n3"}));

    // darboux ----------------------------------------------------------------
    auto* darboux = app.add_subcommand("darboux", "normal form of a bivector");
    std::string alpha_path;
    darboux->add_option("--alpha", alpha_path, "bivector JSON file")->required();
    darboux->add_option("-o,--output", out_path, "write the result JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        std::cerr << e.what() << "\n";
        return kExitBadInput;
    }

    try {
        const std::uint64_t seed = resolve_seed(seed_flag);

        if (verify->parsed()) return run_verify(suite, trials, seed, tol, json_path);

        if (ocs_random->parsed()) {
            const auto j = random_complex_structure(ocs_n, ocs_sign, seed);
            json out = complex_structure_to_json(j);
            out["schema"] = 1;
            emit(out, out_path);
            return kExitOk;
        }
        if (ocs_sign_cmd->parsed()) {
            const auto j = complex_structure_from_json(load_json(file_a));
            emit(json{{"schema", 1}, {"sign", structure_sign(j)}}, out_path);
            return kExitOk;
        }
        if (ocs_agree->parsed()) {
            const auto j = complex_structure_from_json(load_json(file_a));
            const auto k = complex_structure_from_json(load_json(file_b));
            const auto mode = agree_mode == "difference" ? AgreementMode::difference
                                                         : AgreementMode::sum;
            const KernelResult kr = agreement_space(j, k, mode);
            json out = kernel_to_json(kr);
            out["schema"] = 1;
            out["mod4"] = kr.dimension % 4;
            emit(out, out_path);
            return kExitOk;
        }
        if (ocs_pair->parsed()) {
            const auto j = complex_structure_from_json(load_json(file_a));
            const auto k = complex_structure_from_json(load_json(file_b));
            Vector p = point_text.empty() ? Vector(Vector::Unit(j.dim(), 0))
                                          : parse_point(point_text);
            if (p.size() != j.dim()) throw SchemaError("point", "dimension mismatch");
            const PairedBases pb = paired_bases(j, k, p);
            json angles = json::array();
            for (const auto& cs : pb.angles)
                angles.push_back(json{{"c", cs[0]}, {"s", cs[1]}});
            emit(json{{"schema", 1},
                      {"E", matrix_to_json(pb.e)},
                      {"F", matrix_to_json(pb.f)},
                      {"Q", matrix_to_json(pb.q)},
                      {"angles", std::move(angles)},
                      {"corner", pb.corner},
                      {"pattern_residual", paired_bases_pattern_residual(pb)}},
                 out_path);
            return kExitOk;
        }

        if (fib_lookup->parsed()) {
            const Fibration f = fibration_from_json(load_json(spec_path));
            const Vector x = parse_point(point_text);
            if (x.size() != 4) throw SchemaError("point", "expected 4 components");
            const OrientedPlane pl = fiber_of(f, x, eps, max_iter);
            json out = plane_to_json(pl);
            out["schema"] = 1;
            out["containment_residual"] = pl.containment_residual(x);
            emit(out, out_path);
            return kExitOk;
        }
        if (fib_check->parsed()) {
            const Fibration f = fibration_from_json(load_json(spec_path));
            const Report report = verify_fibration(f, samples, seed);
            if (!json_path.empty())
                emit(report_to_json(report), json_path);
            else
                print_human_report(report);
            return report.all_passed() ? kExitOk : kExitCheckFailed;
        }
        if (fib_sign->parsed()) {
            const Fibration f = fibration_from_json(load_json(spec_path));
            emit(json{{"schema", 1}, {"sign", fibration_sign(f, seed)}}, out_path);
            return kExitOk;
        }

        if (quat_ce->parsed()) {
            const Report report = s7_nonexistence_report();
            if (!json_path.empty())
                emit(report_to_json(report), json_path);
            else
                print_human_report(report);
            return report.all_passed() ? kExitOk : kExitCheckFailed;
        }
        if (quat_agree->parsed()) {
            const auto q1 = quat_structure_from_json(load_json(file_a));
            const auto q2 = quat_structure_from_json(load_json(file_b));
            Vector p = point_text.empty() ? Vector(Vector::Unit(q1.dim(), 0))
                                          : parse_point(point_text);
            if (p.size() != q1.dim()) throw SchemaError("point", "dimension mismatch");
            const auto verdict = fibers_agree(q1, q2, p);
            const double gap = (fiber_space(q1, p).projector() -
                                fiber_space(q2, p).projector())
                                   .cwiseAbs()
                                   .maxCoeff();
            const char* name = verdict == FiberAgreement::agree_oriented ? "agree_oriented"
                               : verdict == FiberAgreement::agree_unoriented_only
                                   ? "agree_unoriented_only"
                                   : "disagree";
            emit(json{{"schema", 1}, {"agreement", name}, {"projector_gap", gap}}, out_path);
            return kExitOk;
        }
        if (quat_sign_cmd->parsed()) {
            const auto q = quat_structure_from_json(load_json(file_a));
            emit(json{{"schema", 1}, {"sign", quaternionic_sign(q)}}, out_path);
            return kExitOk;
        }

        if (ce->parsed()) {
            if (which == "s7-nonexistence") {
                const Report report = s7_nonexistence_report();
                print_human_report(report);
                return report.all_passed() ? kExitOk : kExitCheckFailed;
            }
            if (which == "s7-nonuniqueness") return run_nonuniqueness();
            return run_chart_n3();
        }

        if (darboux->parsed()) {
            const Bivector alpha = bivector_from_json(load_json(alpha_path));
            const DarbouxForm d = darboux_decompose(alpha);
            const Bivector recon = d.a * area_form(d.p) + d.b * area_form(d.q);
            json out = darboux_to_json(d);
            out["reconstruction_error"] = (recon - alpha).norm();
            emit(out, out_path);
            return kExitOk;
        }

        std::cerr << "no subcommand selected\n";
        return kExitBadInput;
    } catch (const SchemaError& e) {
        std::cerr << e.what() << "\n";
        return kExitBadInput;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitBadInput;
    }
}

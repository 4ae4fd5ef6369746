// serrinlab command-line front end.
//
// Column / symbol map (also shown by --help):
//   R        = N|Omega|/|Gamma|     H0       = |Gamma|/(N|Omega|) = 1/R
//   serrin_l2= ||u_nu - R||_{2,Gamma}        serrin_l1 = ||u_nu - R||_{1,Gamma}
//   sbt_l2   = ||H0 - H||_{2,Gamma}          sbt_pos_part = int (H0-H)^+ dS
//   hk       = int dS/H - N|Omega|           one_over_h = int (1/H - u_nu) dS
//   gap      = rho_e - rho_i about the chosen center z
//   M        = max_Gamma u_nu                tau = stability exponent

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "serrinlab/constants.hpp"
#include "serrinlab/experiments.hpp"

using nlohmann::json;
using namespace serrinlab;

namespace {

json load_json_arg(const std::string& arg) {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '['))
        return json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw Error("cannot open file: " + arg);
    return json::parse(in);
}

struct Options {
    std::string domain_arg;
    int boundary_order = 0;  // 0 = dimension default
    int radial_order = 0;
    int angular_order = 0;
    int degree = 40;
    std::string center = "argmin";
    double theta = 0.1;
    double p = 2.0;
    double tol = 0.0;  // 0 = pick by solver kind
    std::string output;
    std::string format = "table";
};

CenterStrategy parse_center(const std::string& s) {
    if (s == "argmin") return CenterStrategy::argmin_u();
    if (s == "centroid") return CenterStrategy::centroid();
    throw Error("unknown center strategy: " + s);
}

void apply_config(CLI::App& app, const std::string& path) {
    if (path.empty()) return;
    const json cfg = load_json_arg(path);
    for (const auto& [key, value] : cfg.items()) {
        CLI::Option* opt = app.get_option_no_throw("--" + key);
        if (!opt) continue;
        if (opt->count() > 0) continue;  // explicit flags win
        opt->add_result(value.is_string() ? value.get<std::string>()
                                          : value.dump());
        opt->run_callback();
    }
}

void emit(const std::string& text, const std::string& output) {
    if (output.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(output);
    if (!out) throw Error("cannot write: " + output);
    out << text;
}

std::string table(const json& j, const std::string& prefix = "") {
    std::string s;
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            s += prefix + key + ":\n" + table(value, prefix + "  ");
        } else {
            s += prefix + key + " = " + value.dump() + "\n";
        }
    }
    return s;
}

Domain opt_domain(const Options& o) {
    if (o.domain_arg.empty()) throw Error("--domain is required");
    return build_domain(load_json_arg(o.domain_arg));
}

struct Pipeline {
    Domain domain;
    TorsionField field;
    GeometrySummary summary;
    BoundaryGrid bgrid;
    VolumeGrid vgrid;
    Vec z;
};

Pipeline make_pipeline(const Options& o) {
    Domain d = opt_domain(o);
    const int N = d.dim();
    const int bo = o.boundary_order > 0 ? o.boundary_order : default_boundary_order(N);
    const int ro = o.radial_order > 0 ? o.radial_order : default_radial_order(N);
    const int ao = o.angular_order > 0 ? o.angular_order : default_angular_order(N);
    TorsionField f = d.is_ellipsoid() ? TorsionField::solve_ellipsoid(d)
                                      : TorsionField::solve_fourier2d(d, o.degree);
    GeometrySummary s = geometric_summary(d);
    BoundaryGrid bg = boundary_grid(d, bo);
    VolumeGrid vg = volume_grid(d, ro, ao);
    Vec z = select_center(f, parse_center(o.center), vg);
    return {std::move(d), std::move(f), std::move(s),
            std::move(bg), std::move(vg), std::move(z)};
}

int cmd_describe(const Options& o) {
    const Domain d = opt_domain(o);
    json j;
    j["domain"] = d.to_json();
    j["geometry"] = geometric_summary(d).to_json();
    emit(o.format == "json" ? j.dump(2) : table(j), o.output);
    return 0;
}

int cmd_verify(const Options& o) {
    Pipeline pl = make_pipeline(o);
    const Deviation dev(pl.field, pl.z);
    const double tol =
        o.tol > 0 ? o.tol : (pl.field.closed_form() ? 1e-8 : 1e-6);

    std::vector<IdentityReport> reports;
    for (auto& r : verify_idwps(dev, pl.vgrid, pl.bgrid)) reports.push_back(r);
    for (auto& r : verify_h_fundamental(dev, pl.vgrid, pl.bgrid))
        reports.push_back(r);
    for (auto& r : verify_flux(pl.field, pl.bgrid, pl.summary, pl.z))
        reports.push_back(r);
    reports.push_back(verify_harmonic_flux_gradh(dev, pl.vgrid, pl.bgrid));
    if ((pl.bgrid.mean_curvature.array() > 0.0).all())
        reports.push_back(verify_hk(dev, pl.vgrid, pl.bgrid));

    bool failed = false;
    json arr = json::array();
    std::string txt;
    for (const auto& r : reports) {
        const bool ok = r.rel_residual <= tol || r.abs_residual <= 1e-10 * r.scale;
        failed = failed || !ok;
        json e = r.to_json();
        e["pass"] = ok;
        arr.push_back(e);
        char line[256];
        std::snprintf(line, sizeof line, "%-22s lhs=%+.12e rhs=%+.12e rel=%.3e %s\n",
                      r.name.c_str(), r.lhs, r.rhs, r.rel_residual,
                      ok ? "ok" : "FAIL");
        txt += line;
    }
    const auto violations =
        check_pointwise(pl.field, pl.vgrid, pl.bgrid, pl.summary);
    txt += "pointwise violations: " + std::to_string(violations.size()) + "\n";
    failed = failed || !violations.empty();

    json j;
    j["identities"] = arr;
    j["pointwise_violations"] = violations.size();
    j["tolerance"] = tol;
    emit(o.format == "json" ? j.dump(2) : txt, o.output);
    return failed ? 3 : 0;
}

int cmd_deficits(const Options& o) {
    Pipeline pl = make_pipeline(o);
    const json j = deficits(pl.field, pl.bgrid, pl.summary).to_json();
    emit(o.format == "json" ? j.dump(2) : table(j), o.output);
    return 0;
}

int cmd_report(const Options& o) {
    ReportOptions ro;
    ro.boundary_order = o.boundary_order;
    ro.radial_order = o.radial_order;
    ro.angular_order = o.angular_order;
    ro.degree = o.degree;
    ro.center = parse_center(o.center);
    ro.p = o.p;
    ro.theta = o.theta;
    const json j = stability_report(opt_domain(o), ro);
    emit(o.format == "json" ? j.dump(2) : table(j), o.output);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "serrinlab: numerical checks of torsion-problem and soap-bubble "
        "integral identities, deficits, and stability exponents.\n"
        "Symbols: R = N|Omega|/|Gamma|, H0 = 1/R, gap = rho_e - rho_i,\n"
        "serrin_l2 = ||u_nu - R||_2, sbt_l2 = ||H0 - H||_2, M = max u_nu."};
    app.require_subcommand(1);

    Options o;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; explicit flags win");

    auto add_common = [&](CLI::App* sub, bool needs_domain) {
        if (needs_domain)
            sub->add_option("--domain", o.domain_arg,
                            "domain spec: inline JSON or a file path");
        sub->add_option("--boundary-order", o.boundary_order,
                        "boundary quadrature order (0 = dimension default, 256 in 2D)")
            ->check(CLI::Range(0, 4096));
        sub->add_option("--radial-order", o.radial_order,
                        "radial quadrature order (0 = dimension default, 64 in 2D)")
            ->check(CLI::Range(0, 4096));
        sub->add_option("--angular-order", o.angular_order,
                        "volume angular order (0 = dimension default)")
            ->check(CLI::Range(0, 4096));
        sub->add_option("--degree", o.degree, "collocation degree for Fourier domains")
            ->check(CLI::Range(4, 512));
        sub->add_option("--center", o.center, "center strategy: argmin | centroid");
        sub->add_option("--theta", o.theta, "exponent gap for near-1 tau values");
        sub->add_option("--p", o.p, "Lebesgue exponent for norms and constants");
        sub->add_option("--output", o.output, "write output to this path");
        sub->add_option("--format", o.format, "output format: table | json | csv");
    };

    CLI::App* describe = app.add_subcommand("describe", "geometry summary of a domain");
    add_common(describe, true);
    CLI::App* verify = app.add_subcommand(
        "verify", "check all integral identities; exit 3 on residual failure");
    add_common(verify, true);
    verify->add_option("--tol", o.tol,
                       "relative residual bound (default 1e-8 closed form, 1e-6 solver)");
    CLI::App* defc = app.add_subcommand("deficits", "reference constants and deficits");
    add_common(defc, true);
    CLI::App* report = app.add_subcommand(
        "report", "full stability record: gap, deficits, ratios, constants");
    add_common(report, true);

    // constants: closed-form ledger from raw geometric numbers
    double cN = 2, cp = 2, cd = 2, cri = 1, cre = 0, cM = 1, cdz = 0,
           cvol = 0, csurf = 0, ctheta = 0.1;
    CLI::App* cons = app.add_subcommand(
        "constants", "evaluate the closed-form constant ledger from raw inputs");
    cons->add_option("--N", cN, "dimension");
    cons->add_option("--p", cp, "Lebesgue exponent");
    cons->add_option("--d", cd, "diameter d_Omega");
    cons->add_option("--ri", cri, "interior sphere radius r_i");
    cons->add_option("--re", cre, "exterior sphere radius r_e (0 = convex, +inf)");
    cons->add_option("--M", cM, "gradient bound M");
    cons->add_option("--delta-z", cdz, "delta_Gamma(z) (0 = use r_i)");
    cons->add_option("--volume", cvol, "|Omega| (0 = unit-ball default)");
    cons->add_option("--surface", csurf, "|Gamma| (0 = unit-ball default)");
    cons->add_option("--theta", ctheta, "exponent gap");
    cons->add_option("--output", o.output, "write output to this path");
    cons->add_option("--format", o.format, "output format: table | json");

    // fit: family sweep + log-log slope
    std::string family = "ellipse2d", eps_arg, deficit = "serrin-l2";
    int fdim = 2, fmode = 2, jobs = 0;
    CLI::App* fit = app.add_subcommand(
        "fit", "sweep a domain family and fit the stability exponent");
    add_common(fit, false);
    fit->add_option("--family", family, "family: ellipse2d | ellipsoid | fourier");
    fit->add_option("--dim", fdim, "dimension for ellipsoid families");
    fit->add_option("--mode", fmode, "Fourier perturbation mode");
    fit->add_option("--eps", eps_arg, "comma-separated decreasing eps list")
        ->required();
    fit->add_option("--deficit", deficit,
                    "serrin-l2 | serrin-l1 | sbt-l2 | sbt-pos-part | hk | one-over-h");
    fit->add_option("--jobs", jobs, "worker count (0 = hardware concurrency)");

    try {
        app.parse(argc, argv);
        apply_config(app, config_path);

        if (describe->parsed()) return cmd_describe(o);
        if (verify->parsed()) return cmd_verify(o);
        if (defc->parsed()) return cmd_deficits(o);
        if (report->parsed()) return cmd_report(o);

        if (cons->parsed()) {
            GeometrySummary s;
            s.dim = static_cast<int>(cN);
            s.diameter = cd;
            s.r_interior = cri;
            s.r_exterior = cre > 0 ? cre : std::numeric_limits<double>::infinity();
            s.volume = cvol > 0 ? cvol : unit_ball_volume(s.dim);
            s.surface = csurf > 0 ? csurf : s.dim * unit_ball_volume(s.dim);
            const ConstantLedger led = ledger(s, s.dim, cp,
                                             cdz > 0 ? cdz : cri, cM, ctheta);
            const json j = led.to_json();
            emit(o.format == "json" ? j.dump(2) : table(j), o.output);
            return 0;
        }

        if (fit->parsed()) {
            FamilySpec spec;
            if (family == "ellipse2d") {
                spec.kind = FamilySpec::Kind::EllipsoidEccentric;
                spec.dim = 2;
            } else if (family == "ellipsoid") {
                spec.kind = FamilySpec::Kind::EllipsoidEccentric;
                spec.dim = fdim;
            } else if (family == "fourier") {
                spec.kind = FamilySpec::Kind::FourierPerturb;
                spec.dim = 2;
                spec.mode = fmode;
            } else {
                throw Error("unknown family: " + family);
            }
            for (const auto& tok : CLI::detail::split(eps_arg, ','))
                spec.eps.push_back(std::stod(tok));
            spec.deficit = deficit_from_name(deficit);
            spec.center = parse_center(o.center);
            spec.boundary_order = o.boundary_order;
            spec.radial_order = o.radial_order;
            spec.angular_order = o.angular_order;
            spec.degree = o.degree;
            const int nj = jobs > 0
                ? jobs
                : std::max(1u, std::thread::hardware_concurrency());
            const ExponentFit result = run_family(spec, nj);
            std::string out = family_csv(result);
            char foot[160];
            std::snprintf(foot, sizeof foot,
                          "# slope=%.17g intercept=%.17g r2=%.17g points=%d\n",
                          result.fit.slope, result.fit.intercept, result.fit.r2,
                          result.fit.points);
            out += foot;
            emit(out, o.output);
            if (o.output.empty())
                std::fflush(stdout);
            else
                std::printf("slope=%.6f r2=%.6f (%d points)\n", result.fit.slope,
                            result.fit.r2, result.fit.points);
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

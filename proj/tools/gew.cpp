// gew: command-line front end.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gew/config.hpp"
#include "gew/error.hpp"
#include "gew/green.hpp"
#include "gew/oracle.hpp"
#include "gew/output.hpp"
#include "gew/pipeline.hpp"
#include "gew/special.hpp"

namespace fs = std::filesystem;
using namespace gew;
using ojson = nlohmann::ordered_json;

namespace {

// Where error.json goes; moves to the output directory once a config is read.
fs::path g_report_dir = ".";

RunConfig load(const std::string& path, const std::string& out_override)
{
    RunConfig cfg = load_config(path);
    if (!out_override.empty()) cfg.output.out_dir = out_override;
    g_report_dir = cfg.output.out_dir;
    return cfg;
}

void emit(const fs::path& dir, const std::string& name, const std::string& text)
{
    write_text_file((dir / name).string(), text);
}

int cmd_solve(const std::string& cfg_path, const std::string& out_dir)
{
    const RunConfig cfg = load(cfg_path, out_dir);
    const RunResult r = run(cfg);
    write_artifacts(cfg, r);
    std::cout << metrics_json(r);
    return 0;
}

int cmd_green_check(double k0, double rmin, double rmax, const std::string& split, double delta, int points)
{
    if (!(k0 > 0.0) || !(rmin > 0.0) || !(rmax >= rmin) || points < 1)
        throw ConfigError("green-check: need k0 > 0, 0 < rmin <= rmax, points >= 1");
    EwaldConfig cfg;
    cfg.k0 = k0;
    if (split == "auto") {
        if (!(delta > 0.0)) throw ConfigError("green-check: --delta must be positive");
        cfg.split = optimal_split(k0, delta);
    } else {
        try {
            cfg.split = std::stod(split);
        } catch (const std::exception&) {
            throw ConfigError("green-check: --split expects \"auto\" or a number");
        }
    }
    cfg.validate();
    ojson out;
    out["k0"] = k0;
    out["split"] = cfg.split;
    double worst = 0.0;
    ojson rows = ojson::array();
    for (int i = 0; i < points; ++i) {
        const double R = points == 1 ? rmin : rmin * std::pow(rmax / rmin, static_cast<double>(i) / (points - 1));
        const cplx exact = green_exact(R, k0);
        const cplx split_sum = green_spatial(R, 0.0, cfg) + green_spectral(R, 0.0, cfg);
        const double rel = std::abs(split_sum - exact) / std::abs(exact);
        worst = std::max(worst, rel);
        rows.push_back({{"R", R}, {"rel_error", rel}});
    }
    out["max_rel_error"] = worst;
    out["samples"] = rows;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_dual_window(const std::string& cfg_path, const std::string& out_dir)
{
    const RunConfig cfg = load(cfg_path, out_dir);
    const SampledWindow eta = canonical_dual_window(cfg.frame);
    const DualWindow dw = fit_dual(cfg);
    std::string csv = "x,g,eta_re,eta_im,fit_re,fit_im\n";
    for (std::size_t i = 0; i < eta.values.size(); ++i) {
        const double x = eta.x(i);
        const cplx fit = dw.value(x, cfg.frame);
        csv += format_double(x) + "," + format_double(window_value(x, cfg.frame)) + "," +
               format_double(eta.values[i].real()) + "," + format_double(eta.values[i].imag()) + "," +
               format_double(fit.real()) + "," + format_double(fit.imag()) + "\n";
    }
    const fs::path dir(cfg.output.out_dir);
    emit(dir, "dual_window.csv", csv);
    ojson out;
    out["criterion"] = dw.criterion;
    out["N_u"] = dw.Nu;
    out["N_v"] = dw.Nv;
    out["residual"] = dw.residual;
    out["condition"] = dw.condition;
    ojson coeffs = ojson::array();
    for (int u = -dw.Nu; u <= dw.Nu; ++u)
        for (int v = -dw.Nv; v <= dw.Nv; ++v) {
            const cplx a = dw.coeff(u, v);
            coeffs.push_back({{"u", u}, {"v", v}, {"re", a.real()}, {"im", a.imag()}});
        }
    out["coefficients"] = coeffs;
    emit(dir, "dual_window.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_tables(const std::string& cfg_path, const std::string& out_dir)
{
    RunConfig cfg = load(cfg_path, out_dir);
    cfg.cache.enabled = true;
    const auto t0 = std::chrono::steady_clock::now();
    const DualWindow dw = fit_dual(cfg);
    const TablePair t = prepare_tables(cfg, dw);
    ojson out;
    out["cache_path"] = cfg.cache.path;
    out["table_cache_hit"] = t.cache_hit;
    out["split"] = cfg.ewald.split;
    out["spatial"] = {{"Q", t.spatial->Q}, {"P", t.spatial->P}, {"entries", t.spatial->data.size()}};
    out["spectral"] = {{"Q", t.spectral->Q}, {"P", t.spectral->P}, {"entries", t.spectral->data.size()}};
    out["evaluations"] = t.evaluations;
    out["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_compare(const std::string& cfg_path, const std::string& out_dir, double cell)
{
    const RunConfig cfg = load(cfg_path, out_dir);
    MoMConfig mc;
    mc.cell = cell;
    mc.resolve_cell(cfg.scene.k0);
    Prepared p = prepare(cfg);
    const Solution sol = solve(*p.op, p.J_inc, cfg.solver);
    const auto t0 = std::chrono::steady_clock::now();
    const MoMSolution mom = mom_solve(cfg.scene, mc);
    const double mom_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const FieldGrid ref = mom.centre_grid(&cfg.scene);
    const FieldGrid ours = synthesize_field(sol, ref, cfg.frame, cfg.zgrid, FieldKind::chi_scattered);
    const FieldComparison in = compare_fields(ours, ref, Mask::inside, cfg.scene);
    const FieldComparison full = compare_fields(ours, ref, Mask::full, cfg.scene);

    const fs::path dir(cfg.output.out_dir);
    std::string csv = "x,z,abs_error\n";
    for (int iz = 0; iz < in.abs_error.nz; ++iz)
        for (int ix = 0; ix < in.abs_error.nx; ++ix)
            csv += format_double(in.abs_error.x(ix)) + "," + format_double(in.abs_error.z(iz)) + "," +
                   format_double(in.abs_error.at(ix, iz).real()) + "\n";
    emit(dir, "error_grid.csv", csv);
    ojson out;
    out["oracle_cell"] = mom.cell;
    out["oracle_unknowns"] = mom.active.size();
    out["oracle_wall_time"] = mom_time;
    out["rel_l2_inside"] = in.rel_l2;
    out["max_abs_inside"] = in.max_abs;
    out["points_inside"] = in.points;
    out["rel_l2_full"] = full.rel_l2;
    out["residual_norm"] = sol.residual_norm;
    out["iterations"] = sol.iterations;
    out["condition_estimate"] = sol.condition_estimate;
    if (std::holds_alternative<Circle>(cfg.scene.shape)) {
        // oracle against the cylinder series at the same cell centres
        double num = 0.0, den = 0.0;
        for (std::size_t u = 0; u < mom.active.size(); ++u) {
            const cplx s = cylinder_series_scattered(cfg.scene, mom.cx(u), mom.cz(u));
            if (contrast_at(mom.cx(u), mom.cz(u), cfg.scene) == 0.0) continue;
            num += std::norm(mom.scattered[u] - s);
            den += std::norm(s);
        }
        out["oracle_vs_series_rel_l2"] = std::sqrt(num / den);
    }
    emit(dir, "compare.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return 0;
}

int exit_code_for(const Error& e)
{
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const NonConvergence*>(&e) || dynamic_cast<const QuadratureFailure*>(&e)) return 3;
    return 1;
}

int report(const std::string& kind, const std::string& message, int code)
{
    std::cerr << "gew: " << kind << ": " << message << "\n";
    try {
        write_text_file((g_report_dir / "error.json").string(), error_json(kind, message, code));
    } catch (const std::exception& e) {
        std::cerr << "gew: could not write error.json: " << e.what() << "\n";
    }
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gabor-frame / Ewald volume integral equation solver for 2D TE scattering"};
    app.require_subcommand(1);
    std::string cfg_path, out_dir, split = "auto";
    double k0 = 0.0, rmin = 0.0, rmax = 0.0, delta = 0.05, cell = 0.0;
    int points = 30;

    auto* solve_cmd = app.add_subcommand("solve", "solve a scene and write field, heatmap and metrics");
    solve_cmd->add_option("config", cfg_path, "config file")->required();
    solve_cmd->add_option("--out-dir", out_dir, "override output.out_dir");

    auto* green_cmd = app.add_subcommand("green-check", "compare the split Green function with the Hankel form");
    green_cmd->add_option("--k0", k0, "wavenumber")->required();
    green_cmd->add_option("--rmin", rmin, "smallest distance")->required();
    green_cmd->add_option("--rmax", rmax, "largest distance")->required();
    green_cmd->add_option("--split", split, "splitting parameter or \"auto\"");
    green_cmd->add_option("--delta", delta, "z spacing used by --split auto");
    green_cmd->add_option("--points", points, "log-spaced sample count");

    auto* dual_cmd = app.add_subcommand("dual-window", "fit the dual window and write samples");
    dual_cmd->add_option("config", cfg_path, "config file")->required();
    dual_cmd->add_option("--out-dir", out_dir, "override output.out_dir");

    auto* tables_cmd = app.add_subcommand("tables", "build the kernel tables into the cache");
    tables_cmd->add_option("config", cfg_path, "config file")->required();
    tables_cmd->add_option("--out-dir", out_dir, "override output.out_dir");

    auto* compare_cmd = app.add_subcommand("compare", "solve and compare against the moment-method oracle");
    compare_cmd->add_option("config", cfg_path, "config file")->required();
    compare_cmd->add_option("--oracle-cell", cell, "oracle cell size (default lambda/20)");
    compare_cmd->add_option("--out-dir", out_dir, "override output.out_dir");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return report("UsageError", e.what(), 2);
    }

    try {
        if (*solve_cmd) return cmd_solve(cfg_path, out_dir);
        if (*green_cmd) return cmd_green_check(k0, rmin, rmax, split, delta, points);
        if (*dual_cmd) return cmd_dual_window(cfg_path, out_dir);
        if (*tables_cmd) return cmd_tables(cfg_path, out_dir);
        if (*compare_cmd) return cmd_compare(cfg_path, out_dir, cell);
    } catch (const Error& e) {
        return report(e.kind(), e.what(), exit_code_for(e));
    } catch (const std::exception& e) {
        return report("InternalError", e.what(), 1);
    }
    return 1;
}

#include <chrono>
#include <filesystem>

#include <json.hpp>

#include "gew/error.hpp"
#include "gew/output.hpp"
#include "gew/pipeline.hpp"
#include "gew/scene.hpp"

namespace gew {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

DualWindow fit_dual(const RunConfig& cfg)
{
    const DualConfig& d = cfg.dual;
    DualWindow dw;
    if (d.criterion == "biorthogonal")
        dw = fit_dual_biorthogonal(canonical_dual_window(cfg.frame), d.Nu, d.Nv, cfg.frame);
    else
        dw = fit_dual_coeffs(canonical_dual_window(cfg.frame), d.Nu, d.Nv, cfg.frame);
    if (!(dw.residual <= d.fit_tol))
        throw ConfigError("dual.fit_tol: fit residual " + format_double(dw.residual) + " exceeds " +
                          format_double(d.fit_tol) + " (raise N_u/N_v or fit_tol)");
    return dw;
}

TablePair prepare_tables(const RunConfig& cfg, const DualWindow& dual)
{
    TablePair out;
    bool hit_sp = false, hit_spec = false;
    auto get = [&](TableKind kind, bool* hit) {
        KernelTable t = cfg.cache.enabled
                            ? load_or_build_table(cfg.cache.path, kind, cfg.frame, cfg.zgrid, cfg.ewald, dual.Nu,
                                                  dual.Nv, hit)
                            : build_table(kind, cfg.frame, cfg.zgrid, cfg.ewald, dual.Nu, dual.Nv);
        if (!*hit) out.evaluations += t.evaluations;
        return std::make_shared<const KernelTable>(std::move(t));
    };
    out.spatial = get(TableKind::spatial, &hit_sp);
    out.spectral = get(TableKind::spectral, &hit_spec);
    out.cache_hit = hit_sp && hit_spec;
    return out;
}

Prepared prepare(const RunConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    check_fits(cfg.scene, cfg.frame, cfg.zgrid, 0.5 * cfg.frame.X);
    Prepared p;
    p.dual = fit_dual(cfg);
    p.tables = prepare_tables(cfg, p.dual);
    const Scene scene = cfg.scene;
    p.op = std::make_unique<DiscreteOperator>(p.tables.spatial, p.tables.spectral, p.dual, cfg.frame, cfg.zgrid,
                                              [scene](double x, double z) { return contrast_at(x, z, scene); });
    p.J_inc = project_source(cfg.scene, p.op->basis(), cfg.zgrid);
    p.setup_time = seconds_since(t0);
    return p;
}

RunResult run(const RunConfig& cfg)
{
    Prepared p = prepare(cfg);
    RunResult r;
    r.cache_hit = p.tables.cache_hit;
    r.setup_time = p.setup_time;
    r.unknowns = p.op->unknowns();
    const auto t0 = std::chrono::steady_clock::now();
    r.solution = solve(*p.op, p.J_inc, cfg.solver);
    r.solve_time = seconds_since(t0);
    r.field = synthesize_field(r.solution, output_grid(cfg), cfg.frame, cfg.zgrid, FieldKind::chi_scattered);
    return r;
}

std::string metrics_json(const RunResult& r)
{
    nlohmann::ordered_json m;
    m["residual_norm"] = r.solution.residual_norm;
    m["iterations"] = r.solution.iterations;
    m["wall_time_setup"] = r.setup_time;
    m["wall_time_solve"] = r.solve_time;
    m["table_cache_hit"] = r.cache_hit;
    m["condition_estimate"] = r.solution.condition_estimate;
    m["method"] = to_string(r.solution.method);
    m["unknowns"] = r.unknowns;
    return m.dump(2) + "\n";
}

void write_artifacts(const RunConfig& cfg, const RunResult& r)
{
    const std::filesystem::path dir(cfg.output.out_dir);
    std::filesystem::create_directories(dir);
    if (cfg.output.csv) write_field_csv((dir / "field.csv").string(), r.field);
    if (cfg.output.pgm) write_field_pgm((dir / "field.pgm").string(), r.field);
    write_text_file((dir / "metrics.json").string(), metrics_json(r));
}

std::string error_json(const std::string& kind, const std::string& message, int exit_code)
{
    nlohmann::ordered_json e;
    e["error"] = kind;
    e["message"] = message;
    e["exit_code"] = exit_code;
    return e.dump(2) + "\n";
}

}  // namespace gew

#include "liqa/blur_estimator.hpp"
#include "liqa/calibration.hpp"
#include "liqa/canonical.hpp"
#include "liqa/config.hpp"
#include "liqa/conversion.hpp"
#include "liqa/error.hpp"
#include "liqa/evaluation.hpp"
#include "liqa/metrics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace {

using liqa::ConfigLayer;
using liqa::LumaWeights;
using nlohmann::json;
namespace fs = std::filesystem;

// Thrown for bad user input; reported like a CLI11 usage error.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GlobalFlags {
    std::optional<std::string> config_file;
    std::optional<std::string> cache_dir;
    std::optional<std::string> specimen;
    std::optional<double> s_g;
    std::optional<std::string> luma_weights;
    std::optional<std::string> metric;
    std::optional<double> q;
    std::optional<double> anchor_dmos;
    std::optional<double> anchor_xi;
    std::optional<double> tau;
    std::optional<double> height_mm;
    std::optional<int> rows;
    std::optional<double> distance_mm;
    std::optional<int> table_points;
    bool json_out = false;
    int jobs = 1;
};

LumaWeights parse_weights(const std::string& text)
{
    std::vector<double> w;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            w.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("--luma-weights: cannot parse \"" + item + "\"");
        }
    }
    if (w.size() != 3) {
        throw UsageError("--luma-weights needs three comma-separated values");
    }
    return {w[0], w[1], w[2]};
}

ConfigLayer flag_layer(const GlobalFlags& g)
{
    ConfigLayer layer;
    layer.s_g_arcmin = g.s_g;
    if (g.metric) {
        try {
            layer.metric = liqa::parse_metric(*g.metric);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (g.cache_dir) {
        layer.cache_dir = fs::path(*g.cache_dir);
    }
    if (g.specimen) {
        layer.specimen = fs::path(*g.specimen);
    }
    if (g.luma_weights) {
        layer.weights = parse_weights(*g.luma_weights);
    }
    if (g.anchor_dmos.has_value() != g.anchor_xi.has_value()) {
        throw UsageError("--anchor-dmos and --anchor-xi must be given together");
    }
    if (g.anchor_dmos) {
        layer.anchor = liqa::Anchor{*g.anchor_dmos, *g.anchor_xi};
    }
    layer.q = g.q;
    layer.tau = g.tau;
    layer.table_points = g.table_points;
    if (g.height_mm || g.rows || g.distance_mm) {
        if (!g.height_mm || !g.rows || !g.distance_mm) {
            throw UsageError("--height-mm, --rows and --distance-mm must be given together");
        }
        layer.geometry = liqa::DisplayGeometry{*g.height_mm, *g.rows, g.distance_mm};
    }
    return layer;
}

liqa::CliConfig resolve(const GlobalFlags& g)
{
    const ConfigLayer flags = flag_layer(g);
    const ConfigLayer file = g.config_file ? liqa::load_config_file(*g.config_file) : ConfigLayer{};
    try {
        return liqa::resolve_config(flags, file, liqa::config_from_environment(), liqa::default_config());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

liqa::CanonicalParams params_of(const liqa::CliConfig& cfg)
{
    try {
        return cfg.canonical_params();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

void emit(const GlobalFlags& g, const json& doc, const std::string& text)
{
    if (g.json_out) {
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << text;
    }
}

double round_tau(double tau)
{
    return std::round(tau * 1000.0) / 1000.0;
}

struct TableLocation {
    fs::path path;
    liqa::LumaImage specimen;
    std::string specimen_id;
    liqa::SuiteOptions options;
    std::string config_hash;
};

TableLocation locate_table(const liqa::CliConfig& cfg, liqa::MetricKind metric, double tau, int jobs)
{
    TableLocation loc;
    loc.specimen = liqa::load_luma(cfg.specimen, cfg.weights);
    loc.specimen_id = cfg.specimen.filename().string();
    loc.options.n = cfg.table_points;
    loc.options.s_g_px = cfg.s_g_arcmin;
    loc.options.jobs = jobs;
    loc.config_hash = liqa::suite_config_hash(metric, tau, loc.options);
    loc.path = liqa::table_cache_path(cfg.cache_dir, metric, tau, liqa::image_digest(loc.specimen),
                                      loc.config_hash);
    return loc;
}

liqa::ConversionTable build_and_store(const TableLocation& loc, liqa::MetricKind metric, double tau,
                                      const fs::path& out)
{
    const auto suite = liqa::build_suite(loc.specimen, loc.specimen_id, metric, tau, loc.options);
    auto table = liqa::build_table(suite, loc.config_hash);
    table.save(out);
    return table;
}

// Table from --table, else from the cache; builds into the cache when allowed.
liqa::ConversionTable obtain_table(const liqa::CliConfig& cfg, const std::optional<std::string>& explicit_path,
                                   liqa::MetricKind metric, double tau, bool build_missing, int jobs)
{
    if (explicit_path) {
        if (!fs::exists(*explicit_path)) {
            throw liqa::Error("conversion table not found: " + *explicit_path);
        }
        return liqa::ConversionTable::load(*explicit_path);
    }
    const TableLocation loc = locate_table(cfg, metric, tau, jobs);
    if (fs::exists(loc.path)) {
        return liqa::ConversionTable::load(loc.path);
    }
    if (!build_missing) {
        throw liqa::Error("conversion table not found; expected cache path " + loc.path.string() +
                          " (run build-table or pass --build-missing)");
    }
    std::cerr << "building conversion table " << loc.path.string() << '\n';
    return build_and_store(loc, metric, tau, loc.path);
}

std::vector<std::pair<double, double>> read_pair_csv(const fs::path& path, const std::string& x_col,
                                                     const std::string& y_col)
{
    std::ifstream in(path);
    if (!in) {
        throw liqa::Error("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw liqa::ParseError(path.string() + ": empty file");
    }
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            while (!item.empty() && (item.back() == '\r' || item.back() == ' ')) {
                item.pop_back();
            }
            out.push_back(item);
        }
        return out;
    };
    const auto header = split(line);
    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        throw liqa::ParseError(path.string() + ": missing column \"" + name + "\"");
    };
    const std::size_t xi = col(x_col);
    const std::size_t yi = col(y_col);
    std::vector<std::pair<double, double>> pairs;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto f = split(line);
        try {
            pairs.emplace_back(std::stod(f.at(xi)), std::stod(f.at(yi)));
        } catch (const std::exception&) {
            throw liqa::ParseError(path.string() + ": row " + std::to_string(row) + " is malformed");
        }
    }
    return pairs;
}

liqa::Manifest load_nonempty_manifest(const fs::path& path)
{
    liqa::Manifest m = liqa::load_manifest(path);
    for (const auto& w : m.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    if (m.records.empty()) {
        throw liqa::InsufficientDataError("manifest has no records: " + path.string());
    }
    return m;
}

// (xi, dmos) over the blur records of a manifest, xi estimated by spectral division.
liqa::CanonicalFit regress_canonical(const liqa::Manifest& m, const liqa::CliConfig& cfg, int jobs,
                                     std::vector<std::pair<double, double>>* pairs_out = nullptr)
{
    liqa::CanonicalParams probe;
    probe.s_g_arcmin = cfg.s_g_arcmin;
    liqa::BlurEstimatorOptions est;
    est.s_g_px = cfg.s_g_arcmin;
    const auto report = liqa::evaluate(m.records, liqa::CanonicalPipeline{est}, probe, {jobs, cfg.weights});
    std::vector<std::pair<double, double>> pairs;
    for (const auto& p : report.predictions) {
        if (p.xi && *p.xi > 0.0) {
            pairs.emplace_back(*p.xi, p.actual);
        }
    }
    if (pairs_out != nullptr) {
        *pairs_out = pairs;
    }
    return liqa::fit_canonical(pairs);
}

std::string fmt(double v, int prec = 4)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << v;
    return os.str();
}

json params_json(const liqa::CanonicalParams& p)
{
    return {{"q", p.q}, {"tau", p.tau}, {"s_g_arcmin", p.s_g_arcmin}};
}

int cmd_geometry(const GlobalFlags& g)
{
    if (!g.height_mm || !g.rows) {
        throw UsageError("geometry needs --height-mm and --rows");
    }
    double nominal = 0.0;
    try {
        nominal = liqa::nominal_vd(*g.height_mm, *g.rows);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    json doc = {{"height_mm", *g.height_mm}, {"rows", *g.rows}, {"nominal_vd_mm", nominal}};
    std::string text = "nominal_vd_mm " + fmt(nominal, 2) + "\n";
    if (g.distance_mm) {
        try {
            const liqa::ViewingGeometry geo(*g.height_mm, *g.rows, *g.distance_mm);
            doc["distance_mm"] = *g.distance_mm;
            doc["tau"] = geo.tau();
            text += "tau " + fmt(geo.tau()) + "\n";
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    emit(g, doc, text);
    return 0;
}

int cmd_build_table(const GlobalFlags& g, const std::optional<std::string>& out)
{
    const auto cfg = resolve(g);
    const double tau = round_tau(params_of(cfg).tau);
    const TableLocation loc = locate_table(cfg, cfg.metric, tau, g.jobs);
    const fs::path target = out ? fs::path(*out) : loc.path;
    const auto table = build_and_store(loc, cfg.metric, tau, target);
    json doc = {{"path", target.string()},
                {"metric", liqa::metric_name(cfg.metric)},
                {"tau", tau},
                {"knots", table.knots().size()},
                {"specimen_id", loc.specimen_id},
                {"config_hash", loc.config_hash}};
    emit(g, doc,
         "wrote " + target.string() + " (" + std::string(liqa::metric_name(cfg.metric)) + ", tau " + fmt(tau, 3) +
             ", " + std::to_string(table.knots().size()) + " knots)\n");
    return 0;
}

int cmd_estimate_blur(const GlobalFlags& g, const std::string& ref, const std::string& deg,
                      const liqa::BlurEstimatorOptions& base)
{
    const auto cfg = resolve(g);
    liqa::BlurEstimatorOptions opts = base;
    opts.s_g_px = cfg.s_g_arcmin;
    const auto r = liqa::load_luma(ref, cfg.weights);
    const auto d = liqa::load_luma(deg, cfg.weights);
    const auto est = liqa::estimate_blur(r, d, opts);
    json doc = {{"sigma_px", est.sigma_px}, {"xi", est.xi}, {"fit_r2", est.fit_r2}, {"bins_used", est.bins_used}};
    emit(g, doc,
         "sigma_px " + fmt(est.sigma_px) + "\nxi " + fmt(est.xi) + "\nfit_r2 " + fmt(est.fit_r2) + "\nbins_used " +
             std::to_string(est.bins_used) + "\n");
    return 0;
}

int cmd_rate(const GlobalFlags& g, const std::string& ref, const std::string& deg, const std::string& pipeline,
             const std::optional<std::string>& table_path, bool build_missing)
{
    const auto cfg = resolve(g);
    liqa::CanonicalParams params = params_of(cfg);
    const auto r = liqa::load_luma(ref, cfg.weights);
    const auto d = liqa::load_luma(deg, cfg.weights);
    json doc;
    std::string text;
    if (pipeline == "canonical") {
        liqa::BlurEstimatorOptions opts;
        opts.s_g_px = cfg.s_g_arcmin;
        const auto est = liqa::estimate_blur(r, d, opts);
        const double dmos = liqa::canonical_dmos(params, liqa::NormalizedBlur(est.xi));
        doc = {{"pipeline", "canonical"}, {"xi", est.xi}, {"sigma_px", est.sigma_px}, {"dmos", dmos}};
        text = "xi " + fmt(est.xi) + "\ndmos " + fmt(dmos, 2) + "\n";
    } else if (pipeline == "liqa") {
        params.tau = round_tau(params.tau);
        const auto table = obtain_table(cfg, table_path, cfg.metric, params.tau, build_missing, 1);
        if (table_path) {
            params.tau = table.tau();
        }
        const auto score = liqa::score_for_table(table, r, d);
        const double zeta = liqa::oriented_value(score);
        const auto xi = table.convert(zeta);
        const double dmos = liqa::canonical_dmos(params, xi);
        doc = {{"pipeline", "liqa"},
               {"metric", liqa::metric_name(table.metric().kind)},
               {"zeta", score.value},
               {"xi", xi.value()},
               {"dmos", dmos}};
        text = std::string(liqa::metric_name(table.metric().kind)) + " " + fmt(score.value, 6) + "\nxi " +
               fmt(xi.value()) + "\ndmos " + fmt(dmos, 2) + "\n";
    } else {
        throw UsageError("--pipeline must be canonical or liqa");
    }
    doc["params"] = params_json(params);
    emit(g, doc, text);
    return 0;
}

int cmd_fit_canonical(const GlobalFlags& g, const std::optional<std::string>& data,
                      const std::optional<std::string>& manifest)
{
    if (data.has_value() == manifest.has_value()) {
        throw UsageError("fit-canonical needs exactly one of --data or --manifest");
    }
    const auto cfg = resolve(g);
    liqa::CanonicalFit fit;
    if (data) {
        fit = liqa::fit_canonical(read_pair_csv(*data, "xi", "dmos"));
    } else {
        fit = regress_canonical(load_nonempty_manifest(*manifest), cfg, g.jobs);
    }
    if (fit.unidentifiable) {
        std::cerr << "warning: blur span under one decade; Q and tau are poorly separated\n";
    }
    emit(g, json::parse(liqa::to_json(fit)),
         "q " + fmt(fit.q) + "\ntau " + fmt(fit.tau) + "\nrmse " + fmt(fit.rmse) + "\n");
    return 0;
}

int cmd_fit_logistic(const GlobalFlags& g, const std::optional<std::string>& data,
                     const std::optional<std::string>& manifest)
{
    if (data.has_value() == manifest.has_value()) {
        throw UsageError("fit-logistic needs exactly one of --data or --manifest");
    }
    const auto cfg = resolve(g);
    liqa::LogisticFit fit;
    if (data) {
        fit = liqa::fit_logistic(read_pair_csv(*data, "zeta", "dmos"));
    } else {
        const auto m = load_nonempty_manifest(*manifest);
        const auto report = liqa::evaluate(m.records, liqa::VqegPipeline{cfg.metric}, {}, {g.jobs, cfg.weights});
        fit = *report.logistic;
    }
    const auto& b = fit.params.beta;
    emit(g, json::parse(liqa::to_json(fit)),
         "beta " + fmt(b[0], 6) + " " + fmt(b[1], 6) + " " + fmt(b[2], 6) + " " + fmt(b[3], 6) + " " + fmt(b[4], 6) +
             "\nrmse " + fmt(fit.rmse) + "\n");
    return 0;
}

int cmd_evaluate(const GlobalFlags& g, const std::string& manifest_path, const std::string& pipeline,
                 const std::optional<std::string>& table_path, bool build_missing, bool regress,
                 const std::optional<std::string>& out, const std::optional<std::string>& scatter)
{
    const auto cfg = resolve(g);
    liqa::CanonicalParams params = params_of(cfg);
    const auto m = load_nonempty_manifest(manifest_path);
    if (regress) {
        const auto fit = regress_canonical(m, cfg, g.jobs);
        params.q = fit.q;
        params.tau = fit.tau;
        std::cerr << "regressed q " << fmt(fit.q) << " tau " << fmt(fit.tau) << '\n';
    }

    std::optional<liqa::ConversionTable> table;
    liqa::Pipeline pipe;
    if (pipeline == "canonical") {
        liqa::BlurEstimatorOptions est;
        est.s_g_px = cfg.s_g_arcmin;
        pipe = liqa::CanonicalPipeline{est};
    } else if (pipeline == "liqa") {
        params.tau = round_tau(params.tau);
        table = obtain_table(cfg, table_path, cfg.metric, params.tau, build_missing || regress, g.jobs);
        if (table_path) {
            params.tau = table->tau();
        }
        pipe = liqa::LiqaPipeline{&*table};
    } else if (pipeline == "vqeg") {
        pipe = liqa::VqegPipeline{cfg.metric};
    } else {
        throw UsageError("--pipeline must be canonical, liqa or vqeg");
    }

    const auto report = liqa::evaluate(m.records, pipe, params, {g.jobs, cfg.weights});
    for (const auto& s : report.skipped) {
        std::cerr << "skipped record " << s.record << ": " << s.reason << '\n';
    }
    const std::string report_json = liqa::to_json(report);
    if (out) {
        std::ofstream f(*out);
        if (!f) {
            throw liqa::Error("cannot write " + *out);
        }
        f << report_json << '\n';
    }
    if (scatter) {
        std::ofstream f(*scatter);
        if (!f) {
            throw liqa::Error("cannot write " + *scatter);
        }
        liqa::write_scatter_csv(report, f);
    }
    if (g.json_out || !out) {
        std::cout << report_json << '\n';
    } else {
        auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string("n/a"); };
        std::cout << report.method_id << " n " << report.overall.n << " rmse " << fmt(report.overall.rmse)
                  << " srocc " << opt(report.overall.srocc) << " plcc " << opt(report.overall.plcc) << '\n';
        for (const auto& [cls, s] : report.per_distortion) {
            std::cout << "  " << liqa::distortion_name(cls) << " n " << s.n << " rmse " << fmt(s.rmse) << " srocc "
                      << opt(s.srocc) << " plcc " << opt(s.plcc) << '\n';
        }
        if (!report.skipped.empty()) {
            std::cout << "skipped " << report.skipped.size() << '\n';
        }
    }
    return 0;
}

void add_params_flags(CLI::App* cmd, GlobalFlags& g)
{
    cmd->add_option("--q", g.q, "Scoring gain Q (exclusive with --anchor-*)");
    cmd->add_option("--anchor-dmos", g.anchor_dmos, "Anchor DMOS d_A");
    cmd->add_option("--anchor-xi", g.anchor_xi, "Anchor normalized blur xi_A");
    cmd->add_option("--tau", g.tau, "Normalized viewing distance (exclusive with geometry flags)");
    cmd->add_option("--height-mm", g.height_mm, "Display height in mm");
    cmd->add_option("--rows", g.rows, "Display rows");
    cmd->add_option("--distance-mm", g.distance_mm, "Viewing distance in mm");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Linearized image quality assessment"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    app.add_option("--config", g.config_file, "JSON config file");
    app.add_option("--cache-dir", g.cache_dir, "Conversion table cache directory");
    app.add_option("--specimen", g.specimen, "Specimen image for conversion tables");
    app.add_option("--s-g", g.s_g, "Neural spread s_G in arcmin");
    app.add_option("--luma-weights", g.luma_weights, "R,G,B luminance weights");
    app.add_flag("--json", g.json_out, "Machine-readable output");
    app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--table-points", g.table_points, "Blur levels per conversion table (cache key)");

    auto* geometry = app.add_subcommand("geometry", "Nominal viewing distance and tau");
    geometry->add_option("--height-mm", g.height_mm, "Display height in mm")->required();
    geometry->add_option("--rows", g.rows, "Display rows")->required();
    geometry->add_option("--distance-mm", g.distance_mm, "Viewing distance in mm");

    std::optional<std::string> table_out;
    auto* build = app.add_subcommand("build-table", "Build a metric-to-blur conversion table");
    build->add_option("--metric", g.metric, "MSSIM, GMSD or VIFP");
    build->add_option("--out", table_out, "Output path (default: cache)");
    build->add_option("--tau", g.tau, "Normalized viewing distance");
    build->add_option("--height-mm", g.height_mm, "Display height in mm");
    build->add_option("--rows", g.rows, "Display rows");
    build->add_option("--distance-mm", g.distance_mm, "Viewing distance in mm");
    build->add_option("-n,--points", g.table_points, "Number of blur levels");

    std::string ref;
    std::string deg;
    liqa::BlurEstimatorOptions est_opts;
    auto* estimate = app.add_subcommand("estimate-blur", "Estimate Gaussian blur spread of deg against ref");
    estimate->add_option("--ref", ref, "Reference image")->required();
    estimate->add_option("--deg", deg, "Degraded image")->required();
    estimate->add_option("--rho-min", est_opts.rho_min, "Lower band edge, cycles/pixel");
    estimate->add_option("--rho-max", est_opts.rho_max, "Upper band edge, cycles/pixel");
    estimate->add_option("--bins", est_opts.n_bins, "Radial bins");

    std::string pipeline = "liqa";
    std::optional<std::string> table_path;
    bool build_missing = false;
    auto* rate = app.add_subcommand("rate", "Predict DMOS for one image pair");
    rate->add_option("--ref", ref, "Reference image")->required();
    rate->add_option("--deg", deg, "Degraded image")->required();
    rate->add_option("--pipeline", pipeline, "liqa or canonical");
    rate->add_option("--metric", g.metric, "MSSIM, GMSD or VIFP");
    rate->add_option("--table", table_path, "Conversion table file");
    rate->add_flag("--build-missing", build_missing, "Build the table into the cache when absent");
    add_params_flags(rate, g);

    std::optional<std::string> data;
    std::optional<std::string> manifest_opt;
    auto* fitc = app.add_subcommand("fit-canonical", "Least-squares Q and tau from (xi, dmos) data");
    fitc->add_option("--data", data, "CSV with xi,dmos columns");
    fitc->add_option("--manifest", manifest_opt, "Manifest; xi estimated on blur records");

    auto* fitl = app.add_subcommand("fit-logistic", "Five-parameter logistic from (zeta, dmos) data");
    fitl->add_option("--data", data, "CSV with zeta,dmos columns");
    fitl->add_option("--manifest", manifest_opt, "Manifest; zeta computed with --metric");
    fitl->add_option("--metric", g.metric, "MSSIM, GMSD or VIFP");

    std::string manifest;
    bool regress = false;
    std::optional<std::string> report_out;
    std::optional<std::string> scatter_out;
    auto* evaluate = app.add_subcommand("evaluate", "Score a database manifest");
    evaluate->add_option("--manifest", manifest, "CSV or JSON manifest")->required();
    evaluate->add_option("--pipeline", pipeline, "liqa, vqeg or canonical");
    evaluate->add_option("--metric", g.metric, "MSSIM, GMSD or VIFP");
    evaluate->add_option("--table", table_path, "Conversion table file");
    evaluate->add_flag("--build-missing", build_missing, "Build the table into the cache when absent");
    evaluate->add_flag("--regress-params", regress, "Fit Q and tau on the blur records first");
    evaluate->add_option("--out", report_out, "Report JSON path");
    evaluate->add_option("--scatter", scatter_out, "Scatter CSV path");
    add_params_flags(evaluate, g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*geometry) {
            return cmd_geometry(g);
        }
        if (*build) {
            return cmd_build_table(g, table_out);
        }
        if (*estimate) {
            return cmd_estimate_blur(g, ref, deg, est_opts);
        }
        if (*rate) {
            return cmd_rate(g, ref, deg, pipeline, table_path, build_missing);
        }
        if (*fitc) {
            return cmd_fit_canonical(g, data, manifest_opt);
        }
        if (*fitl) {
            return cmd_fit_logistic(g, data, manifest_opt);
        }
        if (*evaluate) {
            return cmd_evaluate(g, manifest, pipeline, table_path, build_missing, regress, report_out, scatter_out);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#include "liqa/config.hpp"

#include "liqa/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace liqa {

using nlohmann::json;

CanonicalParams CliConfig::canonical_params() const
{
    CanonicalParams p;
    p.s_g_arcmin = s_g_arcmin;
    if (anchor) {
        p.q = scoring_gain_from_anchor(anchor->dmos, NormalizedBlur(anchor->xi));
    } else if (q) {
        p.q = *q;
    }
    if (geometry) {
        if (!geometry->distance_mm) {
            throw std::invalid_argument("geometry needs a viewing distance to determine tau");
        }
        p.tau = ViewingGeometry(geometry->height_mm, geometry->rows, *geometry->distance_mm).tau();
    } else if (tau) {
        p.tau = *tau;
    }
    p.validate();
    return p;
}

namespace {

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p)
{
    std::filesystem::path path(p);
    return path.is_absolute() ? path : (base / path).lexically_normal();
}

double number_at(const json& obj, const char* key, const std::string& where)
{
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw ParseError(where + ": \"" + key + "\" must be a number");
    }
    return v.get<double>();
}

}  // namespace

ConfigLayer load_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config file: " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string where = "config " + path.string();
    const auto base = path.parent_path();

    ConfigLayer layer;
    try {
        const json doc = json::parse(ss.str());
        if (!doc.is_object()) {
            throw ParseError(where + ": top level must be an object");
        }
        if (doc.contains("s_g_arcmin")) {
            layer.s_g_arcmin = number_at(doc, "s_g_arcmin", where);
        }
        if (doc.contains("metric")) {
            layer.metric = parse_metric(doc.at("metric").get<std::string>());
        }
        if (doc.contains("cache_dir")) {
            layer.cache_dir = resolve_path(base, doc.at("cache_dir").get<std::string>());
        }
        if (doc.contains("specimen")) {
            layer.specimen = resolve_path(base, doc.at("specimen").get<std::string>());
        }
        if (doc.contains("anchor")) {
            const auto& a = doc.at("anchor");
            layer.anchor = Anchor{number_at(a, "dmos", where), number_at(a, "xi", where)};
        }
        if (doc.contains("q")) {
            layer.q = number_at(doc, "q", where);
        }
        if (doc.contains("geometry")) {
            const auto& g = doc.at("geometry");
            DisplayGeometry geo;
            geo.height_mm = number_at(g, "height_mm", where);
            geo.rows = g.at("rows").get<int>();
            if (g.contains("distance_mm")) {
                geo.distance_mm = number_at(g, "distance_mm", where);
            }
            layer.geometry = geo;
        }
        if (doc.contains("tau")) {
            layer.tau = number_at(doc, "tau", where);
        }
        if (doc.contains("luma_weights")) {
            const auto w = doc.at("luma_weights").get<std::vector<double>>();
            if (w.size() != 3) {
                throw ParseError(where + ": luma_weights needs three values");
            }
            layer.weights = LumaWeights{w[0], w[1], w[2]};
        }
        if (doc.contains("table_points")) {
            layer.table_points = doc.at("table_points").get<int>();
        }
    } catch (const json::exception& e) {
        throw ParseError(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
    }
    return layer;
}

ConfigLayer config_from_environment()
{
    ConfigLayer layer;
    if (const char* dir = std::getenv("LIQA_CACHE_DIR"); dir != nullptr && *dir != '\0') {
        layer.cache_dir = std::filesystem::path(dir);
    }
    if (const char* spec = std::getenv("LIQA_SPECIMEN"); spec != nullptr && *spec != '\0') {
        layer.specimen = std::filesystem::path(spec);
    }
    return layer;
}

ConfigLayer default_config()
{
    ConfigLayer layer;
    layer.s_g_arcmin = kDefaultNeuralSpreadArcmin;
    layer.metric = MetricKind::gmsd;
    layer.weights = kRec601Weights;
    layer.table_points = 50;
#ifdef LIQA_DATA_DIR
    layer.specimen = std::filesystem::path(LIQA_DATA_DIR) / "images" / "astronaut.png";
#endif
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg != nullptr && *xdg != '\0') {
        layer.cache_dir = std::filesystem::path(xdg) / "liqa";
    } else if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
        layer.cache_dir = std::filesystem::path(home) / ".cache" / "liqa";
    } else {
        layer.cache_dir = std::filesystem::path("liqa-cache");
    }
    return layer;
}

namespace {

template <typename T>
void take(std::optional<T> ConfigLayer::*field, T& out, std::initializer_list<const ConfigLayer*> layers)
{
    for (const ConfigLayer* layer : layers) {
        if (layer->*field) {
            out = *(layer->*field);
            return;
        }
    }
}

void check_group_exclusive(const ConfigLayer& layer, const char* name)
{
    if (layer.anchor && layer.q) {
        throw std::invalid_argument(std::string(name) + ": anchor and explicit Q are mutually exclusive");
    }
    if (layer.geometry && layer.tau) {
        throw std::invalid_argument(std::string(name) + ": geometry and explicit tau are mutually exclusive");
    }
}

}  // namespace

CliConfig resolve_config(const ConfigLayer& flags, const ConfigLayer& file, const ConfigLayer& env,
                         const ConfigLayer& defaults)
{
    check_group_exclusive(flags, "flags");
    check_group_exclusive(file, "config file");
    check_group_exclusive(env, "environment");
    check_group_exclusive(defaults, "defaults");

    const auto layers = {&flags, &file, &env, &defaults};
    CliConfig cfg;
    take(&ConfigLayer::s_g_arcmin, cfg.s_g_arcmin, layers);
    take(&ConfigLayer::metric, cfg.metric, layers);
    take(&ConfigLayer::cache_dir, cfg.cache_dir, layers);
    take(&ConfigLayer::specimen, cfg.specimen, layers);
    take(&ConfigLayer::weights, cfg.weights, layers);
    take(&ConfigLayer::table_points, cfg.table_points, layers);

    for (const ConfigLayer* layer : layers) {
        if (layer->anchor || layer->q) {
            cfg.anchor = layer->anchor;
            cfg.q = layer->q;
            break;
        }
    }
    for (const ConfigLayer* layer : layers) {
        if (layer->geometry || layer->tau) {
            cfg.geometry = layer->geometry;
            cfg.tau = layer->tau;
            break;
        }
    }

    double wsum = 0.0;
    for (double w : cfg.weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("luma weights must be finite and nonnegative");
        }
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-6) {
        throw std::invalid_argument("luma weights must sum to 1");
    }
    if (cfg.table_points < 20) {
        throw std::invalid_argument("table_points must be at least 20");
    }
    return cfg;
}

std::filesystem::path table_cache_path(const std::filesystem::path& cache_dir, MetricKind metric, double tau,
                                       const std::string& specimen_hash, const std::string& config_hash)
{
    char tau_text[32];
    std::snprintf(tau_text, sizeof tau_text, "%.3f", std::round(tau * 1000.0) / 1000.0);
    return cache_dir / (std::string(metric_name(metric)) + "_tau" + tau_text + "_" + specimen_hash + "_" +
                        config_hash + ".json");
}

}  // namespace liqa

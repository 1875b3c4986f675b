#include "liqa/conversion.hpp"

#include "liqa/error.hpp"
#include "liqa/filter.hpp"
#include "parallel.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace liqa {

using nlohmann::json;

std::vector<double> sigma_grid(int n, double sigma_min_px, double sigma_max_px)
{
    if (n < 2 || !(sigma_min_px > 0.0) || !(sigma_max_px > sigma_min_px)) {
        throw std::invalid_argument("sigma_grid: need n >= 2 and 0 < sigma_min < sigma_max");
    }
    std::vector<double> grid{0.0};
    const int steps = n - 1;
    if (steps == 1) {
        grid.push_back(sigma_max_px);
        return grid;
    }
    const double ratio = std::log(sigma_max_px / sigma_min_px) / (steps - 1);
    for (int i = 0; i < steps; ++i) {
        grid.push_back(sigma_min_px * std::exp(ratio * i));
    }
    grid.back() = sigma_max_px;
    return grid;
}

namespace {

LumaImage emulate_viewing_distance(const LumaImage& image, double tau)
{
    if (tau == 1.0) {
        return image;
    }
    return resample(image, 1.0 / tau);
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

}  // namespace

SpecimenSuite build_suite(const LumaImage& specimen, std::string specimen_id, MetricKind metric,
                          double tau, const SuiteOptions& options)
{
    if (specimen.width() < 512 || specimen.height() < 512) {
        throw std::invalid_argument("build_suite: specimen must be at least 512x512");
    }
    if (!(tau >= 0.3 && tau <= 2.0)) {
        throw std::invalid_argument("build_suite: tau must lie in [0.3, 2]");
    }
    if (options.n < 20) {
        throw std::invalid_argument("build_suite: at least 20 grid points are required");
    }

    const auto grid = sigma_grid(options.n, options.sigma_min_px, options.sigma_max_px);
    const LumaImage reference = emulate_viewing_distance(specimen, tau);

    SpecimenSuite suite;
    suite.specimen_id = std::move(specimen_id);
    suite.metric = metric_id(metric);
    suite.tau = tau;
    suite.entries.resize(grid.size());

    detail::parallel_for(grid.size(), options.jobs, [&](std::size_t i) {
        const double sigma = grid[i];
        const LumaImage blurred = emulate_viewing_distance(gaussian_blur(specimen, sigma), tau);
        const MetricScore score = compute_metric(metric, reference, blurred);
        suite.entries[i] = {sigma, sigma / options.s_g_px, oriented_value(score)};
    });

    for (std::size_t i = 1; i < suite.entries.size(); ++i) {
        if (!(suite.entries[i].zeta_oriented > suite.entries[i - 1].zeta_oriented)) {
            std::ostringstream os;
            os << "build_suite: " << metric_name(metric) << " is not strictly monotone in blur at tau="
               << tau << " (sigma " << suite.entries[i - 1].sigma_px << " -> " << suite.entries[i].sigma_px
               << " px gives oriented zeta " << suite.entries[i - 1].zeta_oriented << " -> "
               << suite.entries[i].zeta_oriented << ")";
            throw MonotonicityError(os.str());
        }
    }
    return suite;
}

ConversionTable::ConversionTable(MetricId metric, double tau, std::vector<std::pair<double, double>> knots,
                                 TableProvenance provenance)
    : metric_(metric), tau_(tau), provenance_(std::move(provenance))
{
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("ConversionTable: tau must be positive");
    }
    if (knots.empty()) {
        throw std::invalid_argument("ConversionTable: no knots");
    }
    for (const auto& [zeta, xi] : knots) {
        if (!std::isfinite(zeta) || !std::isfinite(xi) || xi < 0.0) {
            throw std::invalid_argument("ConversionTable: knots must be finite with xi >= 0");
        }
        if (!knots_.empty()) {
            auto& last = knots_.back();
            if (zeta < last.first - 1e-12) {
                throw std::invalid_argument("ConversionTable: knot zeta must be nondecreasing");
            }
            if (xi < last.second) {
                throw std::invalid_argument("ConversionTable: knot xi must be nondecreasing");
            }
            if (zeta - last.first <= 1e-12) {
                last.second = std::max(last.second, xi);
                continue;
            }
        }
        knots_.emplace_back(zeta, xi);
    }
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& [zeta, xi] : knots_) {
        x.push_back(zeta);
        y.push_back(xi);
    }
    interp_ = MonotoneCubic(std::move(x), std::move(y));
}

NormalizedBlur ConversionTable::convert(double zeta_oriented) const noexcept
{
    if (zeta_oriented < knots_.front().first) {
        return NormalizedBlur(0.0);
    }
    if (zeta_oriented >= knots_.back().first) {
        return NormalizedBlur(knots_.back().second);
    }
    return NormalizedBlur(std::max(0.0, interp_(zeta_oriented)));
}

std::string ConversionTable::to_json() const
{
    json knots = json::array();
    for (const auto& [zeta, xi] : knots_) {
        knots.push_back({zeta, xi});
    }
    json doc = {
        {"version", kFormatVersion},
        {"metric", metric_name(metric_.kind)},
        {"orientation", orientation_name(metric_.orientation)},
        {"tau", tau_},
        {"specimen_id", provenance_.specimen_id},
        {"config_hash", provenance_.config_hash},
        {"built_at", provenance_.built_at},
        {"knots", knots},
    };
    return doc.dump(2);
}

ConversionTable ConversionTable::from_json(const std::string& text)
{
    try {
        const json doc = json::parse(text);
        const int version = doc.at("version").get<int>();
        if (version != kFormatVersion) {
            throw ParseError("conversion table: unsupported version " + std::to_string(version));
        }
        const MetricKind kind = parse_metric(doc.at("metric").get<std::string>());
        MetricId id = metric_id(kind);
        if (doc.contains("orientation") &&
            parse_orientation(doc.at("orientation").get<std::string>()) != id.orientation) {
            throw ParseError("conversion table: orientation does not match metric");
        }
        std::vector<std::pair<double, double>> knots;
        for (const auto& k : doc.at("knots")) {
            if (!k.is_array() || k.size() != 2) {
                throw ParseError("conversion table: knots must be [zeta, xi] pairs");
            }
            knots.emplace_back(k[0].get<double>(), k[1].get<double>());
        }
        TableProvenance prov{doc.value("specimen_id", std::string{}), doc.value("built_at", std::string{}),
                             doc.value("config_hash", std::string{})};
        return ConversionTable(id, doc.at("tau").get<double>(), std::move(knots), std::move(prov));
    } catch (const json::exception& e) {
        throw ParseError(std::string("conversion table: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("conversion table: ") + e.what());
    }
}

void ConversionTable::save(const std::filesystem::path& path) const
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write conversion table: " + path.string());
    }
    out << to_json() << '\n';
}

ConversionTable ConversionTable::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read conversion table: " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

ConversionTable build_table(const SpecimenSuite& suite, std::string config_hash)
{
    std::vector<std::pair<double, double>> knots;
    knots.reserve(suite.entries.size());
    for (const auto& e : suite.entries) {
        knots.emplace_back(e.zeta_oriented, e.xi);
    }
    return ConversionTable(suite.metric, suite.tau, std::move(knots),
                           {suite.specimen_id, utc_timestamp(), std::move(config_hash)});
}

NormalizedBlur convert(const ConversionTable& table, double zeta_oriented) noexcept
{
    return table.convert(zeta_oriented);
}

double liqa_dmos(const ConversionTable& table, const CanonicalParams& params, double zeta_oriented)
{
    if (std::abs(table.tau() - params.tau) > 1e-6) {
        std::ostringstream os;
        os << "liqa_dmos: table built for tau=" << table.tau() << " but parameters use tau=" << params.tau;
        throw std::invalid_argument(os.str());
    }
    return canonical_dmos(params, table.convert(zeta_oriented));
}

MetricScore score_for_table(const ConversionTable& table, const LumaImage& reference,
                            const LumaImage& degraded)
{
    return compute_metric(table.metric().kind, emulate_viewing_distance(reference, table.tau()),
                          emulate_viewing_distance(degraded, table.tau()));
}

std::string fnv1a_hex(const void* data, std::size_t size)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string image_digest(const LumaImage& image)
{
    std::vector<double> buf;
    buf.reserve(image.size() + 2);
    buf.push_back(image.width());
    buf.push_back(image.height());
    buf.insert(buf.end(), image.samples().begin(), image.samples().end());
    return fnv1a_hex(buf.data(), buf.size() * sizeof(double));
}

std::string suite_config_hash(MetricKind metric, double tau, const SuiteOptions& options)
{
    std::ostringstream os;
    os << std::setprecision(17) << "metric=" << metric_name(metric) << ";tau=" << tau << ";n=" << options.n
       << ";sigma_min=" << options.sigma_min_px << ";sigma_max=" << options.sigma_max_px
       << ";s_g=" << options.s_g_px << ";resample=bicubic;blur=gauss4";
    const std::string s = os.str();
    return fnv1a_hex(s.data(), s.size());
}

}  // namespace liqa

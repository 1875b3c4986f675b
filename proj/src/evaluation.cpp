#include "liqa/evaluation.hpp"

#include "liqa/error.hpp"
#include "liqa/stats.hpp"
#include "parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace liqa {

using nlohmann::json;

std::string_view distortion_name(Distortion d) noexcept
{
    switch (d) {
    case Distortion::blur:
        return "blur";
    case Distortion::noise:
        return "noise";
    case Distortion::jpeg:
        return "jpeg";
    case Distortion::jpeg2000:
        return "jpeg2000";
    case Distortion::blur_jpeg:
        return "blur_jpeg";
    case Distortion::blur_noise:
        return "blur_noise";
    case Distortion::other:
        break;
    }
    return "other";
}

namespace {

std::string lower_trimmed(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::optional<Distortion> parse_distortion(std::string_view label)
{
    static const std::map<std::string, Distortion, std::less<>> kLabels{
        {"blur", Distortion::blur},           {"gblur", Distortion::blur},
        {"gaussian_blur", Distortion::blur},  {"noise", Distortion::noise},
        {"wn", Distortion::noise},            {"awgn", Distortion::noise},
        {"white_noise", Distortion::noise},   {"jpeg", Distortion::jpeg},
        {"jpeg2000", Distortion::jpeg2000},   {"jp2k", Distortion::jpeg2000},
        {"blur_jpeg", Distortion::blur_jpeg}, {"blur+jpeg", Distortion::blur_jpeg},
        {"blur_noise", Distortion::blur_noise}, {"blur+noise", Distortion::blur_noise},
        {"other", Distortion::other},
    };
    const auto it = kLabels.find(lower_trimmed(label));
    if (it == kLabels.end()) {
        return std::nullopt;
    }
    return it->second;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::optional<double> parse_double(std::string_view s)
{
    const std::string t = lower_trimmed(s);
    if (t.empty()) {
        return std::nullopt;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p)
{
    std::filesystem::path path(p);
    return path.is_absolute() ? path : (base / path).lexically_normal();
}

struct RowBuilder {
    std::filesystem::path base;
    Manifest& manifest;

    void add(std::size_t row, const std::string& ref, const std::string& deg, const std::optional<double>& dmos,
             const std::string& dmos_text, const std::string& distortion, const std::string& database)
    {
        const std::string where = "manifest row " + std::to_string(row);
        if (ref.empty() || deg.empty()) {
            throw ParseError(where + ": empty image path");
        }
        if (!dmos) {
            throw ParseError(where + ": unparseable dmos \"" + dmos_text + "\"");
        }
        EvalRecord rec;
        rec.ref_path = resolve(base, ref);
        rec.deg_path = resolve(base, deg);
        rec.dmos = *dmos;
        rec.database_id = database;
        if (auto d = parse_distortion(distortion)) {
            rec.distortion = *d;
        } else {
            rec.distortion = Distortion::other;
            manifest.warnings.push_back(where + ": unknown distortion \"" + distortion + "\" mapped to other");
        }
        manifest.records.push_back(std::move(rec));
    }
};

void parse_csv_manifest(std::istream& in, RowBuilder& rows)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("manifest is empty");
    }
    const auto header = split_csv_line(line);
    std::map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < header.size(); ++i) {
        column[lower_trimmed(header[i])] = i;
    }
    for (const char* required : {"ref", "deg", "dmos", "distortion"}) {
        if (!column.contains(required)) {
            throw ParseError(std::string("manifest: missing column \"") + required + "\"");
        }
    }
    constexpr std::size_t kNoColumn = static_cast<std::size_t>(-1);
    const std::size_t db_col = column.contains("database") ? column["database"] : kNoColumn;

    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (lower_trimmed(line).empty()) {
            continue;
        }
        const auto f = split_csv_line(line);
        auto field = [&](std::size_t idx) -> std::string {
            if (idx >= f.size()) {
                throw ParseError("manifest row " + std::to_string(row) + ": too few fields");
            }
            return f[idx];
        };
        const std::string dmos_text = field(column["dmos"]);
        rows.add(row, field(column["ref"]), field(column["deg"]), parse_double(dmos_text), dmos_text,
                 field(column["distortion"]), db_col != kNoColumn ? field(db_col) : std::string{});
    }
}

void parse_json_manifest(const std::string& text, RowBuilder& rows)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("manifest: ") + e.what());
    }
    if (!doc.is_array()) {
        throw ParseError("manifest: JSON manifest must be an array of records");
    }
    std::size_t row = 0;
    for (const auto& obj : doc) {
        ++row;
        const std::string where = "manifest row " + std::to_string(row);
        if (!obj.is_object()) {
            throw ParseError(where + ": not an object");
        }
        for (const char* required : {"ref", "deg", "dmos", "distortion"}) {
            if (!obj.contains(required)) {
                throw ParseError(where + ": missing key \"" + required + "\"");
            }
        }
        std::optional<double> dmos;
        std::string dmos_text;
        const auto& d = obj.at("dmos");
        if (d.is_number()) {
            dmos = d.get<double>();
            dmos_text = d.dump();
        } else if (d.is_string()) {
            dmos_text = d.get<std::string>();
            dmos = parse_double(dmos_text);
        } else {
            dmos_text = d.dump();
        }
        auto text_of = [&](const char* key) {
            const auto& v = obj.at(key);
            if (!v.is_string()) {
                throw ParseError(where + ": \"" + key + "\" must be a string");
            }
            return v.get<std::string>();
        };
        std::string database;
        if (obj.contains("database") && obj.at("database").is_string()) {
            database = obj.at("database").get<std::string>();
        }
        rows.add(row, text_of("ref"), text_of("deg"), dmos, dmos_text, text_of("distortion"), database);
    }
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open manifest: " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    Manifest manifest;
    RowBuilder rows{path.parent_path(), manifest};
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        parse_json_manifest(text, rows);
    } else {
        std::istringstream lines(text);
        parse_csv_manifest(lines, rows);
    }
    return manifest;
}

std::string method_id(const Pipeline& pipeline)
{
    struct Visitor {
        std::string operator()(const CanonicalPipeline&) const { return "canonical"; }
        std::string operator()(const LiqaPipeline& p) const
        {
            return p.table ? "liqa:" + std::string(metric_name(p.table->metric().kind)) : "liqa";
        }
        std::string operator()(const VqegPipeline& p) const
        {
            return "vqeg_calibrated:" + std::string(metric_name(p.metric));
        }
    };
    return std::visit(Visitor{}, pipeline);
}

IndexStats summarize(const std::vector<double>& predicted, const std::vector<double>& actual)
{
    IndexStats s;
    s.n = static_cast<long>(predicted.size());
    if (predicted.empty()) {
        return s;
    }
    s.rmse = rmse(predicted, actual);
    if (predicted.size() >= 3) {
        try {
            s.srocc = spearman(predicted, actual);
        } catch (const std::invalid_argument&) {
        }
        try {
            s.plcc = pearson(predicted, actual);
        } catch (const std::invalid_argument&) {
        }
    }
    return s;
}

namespace {

struct RecordOutcome {
    enum class Kind { scored, excluded, skipped } kind = Kind::skipped;
    double value = 0.0;  // predicted DMOS, or raw zeta for the VQEG pass
    std::optional<double> metric_value;
    std::optional<double> xi;
    std::string reason;
};

}  // namespace

EvalReport evaluate(const std::vector<EvalRecord>& records, const Pipeline& pipeline,
                    const CanonicalParams& params, const EvalOptions& options)
{
    params.validate();
    if (const auto* liqa = std::get_if<LiqaPipeline>(&pipeline)) {
        if (liqa->table == nullptr) {
            throw std::invalid_argument("evaluate: LIQA pipeline needs a conversion table");
        }
        if (std::abs(liqa->table->tau() - params.tau) > 1e-6) {
            throw std::invalid_argument("evaluate: conversion table tau does not match params.tau");
        }
    }

    std::vector<RecordOutcome> outcomes(records.size());
    detail::parallel_for(records.size(), options.jobs, [&](std::size_t i) {
        const EvalRecord& rec = records[i];
        RecordOutcome& out = outcomes[i];
        if (std::holds_alternative<CanonicalPipeline>(pipeline) && rec.distortion != Distortion::blur) {
            out.kind = RecordOutcome::Kind::excluded;
            return;
        }
        try {
            const LumaImage ref = load_luma(rec.ref_path, options.weights);
            const LumaImage deg = load_luma(rec.deg_path, options.weights);
            if (const auto* can = std::get_if<CanonicalPipeline>(&pipeline)) {
                BlurEstimatorOptions est_opts = can->estimator;
                est_opts.s_g_px = params.s_g_arcmin;
                const BlurEstimate est = estimate_blur(ref, deg, est_opts);
                out.xi = est.xi;
                out.value = canonical_dmos(params, NormalizedBlur(est.xi));
            } else if (const auto* liqa = std::get_if<LiqaPipeline>(&pipeline)) {
                const MetricScore score = score_for_table(*liqa->table, ref, deg);
                const NormalizedBlur xi = liqa->table->convert(oriented_value(score));
                out.metric_value = score.value;
                out.xi = xi.value();
                out.value = canonical_dmos(params, xi);
            } else {
                const auto& vqeg = std::get<VqegPipeline>(pipeline);
                const MetricScore score = compute_metric(vqeg.metric, ref, deg);
                out.metric_value = score.value;
                out.value = score.value;
            }
            out.kind = RecordOutcome::Kind::scored;
        } catch (const std::exception& e) {
            out.kind = RecordOutcome::Kind::skipped;
            out.reason = e.what();
        }
    });

    EvalReport report;
    report.method_id = method_id(pipeline);
    report.params = params;
    std::vector<std::size_t> scored;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        switch (outcomes[i].kind) {
        case RecordOutcome::Kind::scored:
            scored.push_back(i);
            break;
        case RecordOutcome::Kind::excluded:
            ++report.excluded;
            break;
        case RecordOutcome::Kind::skipped:
            report.skipped.push_back({i, outcomes[i].reason});
            break;
        }
    }
    if (scored.empty()) {
        throw InsufficientDataError("evaluate: no record could be scored");
    }

    if (std::holds_alternative<VqegPipeline>(pipeline)) {
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i : scored) {
            pairs.emplace_back(outcomes[i].value, records[i].dmos);
        }
        report.logistic = fit_logistic(pairs);
        for (std::size_t i : scored) {
            outcomes[i].value = logistic_eval(report.logistic->params, outcomes[i].value);
        }
    }

    std::vector<double> pred;
    std::vector<double> actual;
    std::map<Distortion, std::pair<std::vector<double>, std::vector<double>>> by_class;
    for (std::size_t i : scored) {
        const RecordOutcome& o = outcomes[i];
        report.predictions.push_back({i, o.value, records[i].dmos, records[i].distortion, o.metric_value, o.xi});
        pred.push_back(o.value);
        actual.push_back(records[i].dmos);
        auto& [p, a] = by_class[records[i].distortion];
        p.push_back(o.value);
        a.push_back(records[i].dmos);
    }
    report.overall = summarize(pred, actual);
    for (const auto& [cls, pa] : by_class) {
        report.per_distortion[cls] = summarize(pa.first, pa.second);
    }

    std::string db;
    for (std::size_t i : scored) {
        if (db.empty()) {
            db = records[i].database_id;
        } else if (records[i].database_id != db) {
            db = "mixed";
            break;
        }
    }
    report.database_id = db;
    return report;
}

namespace {

json stats_json(const IndexStats& s)
{
    json j = {{"n", s.n}, {"rmse", s.rmse}};
    j["srocc"] = s.srocc ? json(*s.srocc) : json(nullptr);
    j["plcc"] = s.plcc ? json(*s.plcc) : json(nullptr);
    return j;
}

}  // namespace

std::string to_json(const EvalReport& report)
{
    json per = json::object();
    for (const auto& [cls, s] : report.per_distortion) {
        per[std::string(distortion_name(cls))] = stats_json(s);
    }
    json preds = json::array();
    for (const auto& p : report.predictions) {
        json j = {{"record", p.record},
                  {"predicted_dmos", p.predicted},
                  {"actual_dmos", p.actual},
                  {"distortion", distortion_name(p.distortion)}};
        if (p.metric_value) {
            j["metric_value"] = *p.metric_value;
        }
        if (p.xi) {
            j["xi"] = *p.xi;
        }
        preds.push_back(std::move(j));
    }
    json skipped = json::array();
    for (const auto& s : report.skipped) {
        skipped.push_back({{"record", s.record}, {"reason", s.reason}});
    }
    json doc = {
        {"database_id", report.database_id},
        {"method_id", report.method_id},
        {"params", {{"q", report.params.q}, {"tau", report.params.tau}, {"s_g_arcmin", report.params.s_g_arcmin}}},
        {"n", report.overall.n},
        {"rmse", report.overall.rmse},
        {"srocc", report.overall.srocc ? json(*report.overall.srocc) : json(nullptr)},
        {"plcc", report.overall.plcc ? json(*report.overall.plcc) : json(nullptr)},
        {"per_distortion", per},
        {"skip_count", report.skipped.size()},
        {"skipped", skipped},
        {"excluded", report.excluded},
        {"predictions", preds},
    };
    if (report.logistic) {
        doc["logistic"] = json::parse(to_json(*report.logistic));
    }
    return doc.dump(2);
}

void write_scatter_csv(const EvalReport& report, std::ostream& out)
{
    out << "actual_dmos,predicted_dmos,distortion\n";
    out.precision(17);
    for (const auto& p : report.predictions) {
        out << p.actual << ',' << p.predicted << ',' << distortion_name(p.distortion) << '\n';
    }
}

}  // namespace liqa

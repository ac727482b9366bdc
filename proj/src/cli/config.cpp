#include "segscore/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace segscore::cli {

namespace fs = std::filesystem;

const std::vector<std::string>& known_emit_flags() {
    static const std::vector<std::string> flags = {"csv", "json", "overlays", "plots"};
    return flags;
}

namespace {

Json read_json_file(const fs::path& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw Error("UNREADABLE_FILE", std::string("cannot read ") + what + " " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error("MALFORMED_JSON", std::string("malformed ") + what + " " + path.string() + ": " + e.what());
    }
}

std::size_t positive_count(const Json& v, const char* key) {
    if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
        throw Error("INVALID_CONFIG", std::string(key) + " must be a positive integer");
    }
    return v.get<std::size_t>();
}

std::size_t count(const Json& v, const char* key) {
    if (!v.is_number_unsigned()) throw Error("INVALID_CONFIG", std::string(key) + " must be a non-negative integer");
    return v.get<std::size_t>();
}

std::string text(const Json& v, const char* key) {
    if (!v.is_string()) throw Error("INVALID_CONFIG", std::string(key) + " must be a string");
    return v.get<std::string>();
}

bool flag(const Json& v, const char* key) {
    if (!v.is_boolean()) throw Error("INVALID_CONFIG", std::string(key) + " must be a boolean");
    return v.get<bool>();
}

bool is_mask_file(const fs::path& p) { return format_from_path(p).has_value(); }

// stem -> path for every mask file in a directory
std::map<std::string, fs::path> index_directory(const fs::path& dir, const char* role) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw Error("UNREADABLE_DIRECTORY", std::string(role) + " directory not readable: " + dir.string());
    }
    std::map<std::string, fs::path> out;
    fs::directory_iterator it(dir, ec);
    if (ec) throw Error("UNREADABLE_DIRECTORY", std::string(role) + " directory not readable: " + dir.string());
    for (const auto& entry : it) {
        if (!entry.is_regular_file() || !is_mask_file(entry.path())) continue;
        const std::string stem = entry.path().stem().string();
        auto [pos, inserted] = out.emplace(stem, entry.path());
        if (!inserted) {
            throw Error("AMBIGUOUS_STEM", std::string("two ") + role + " files share the stem '" + stem +
                                              "': " + pos->second.filename().string() + ", " +
                                              entry.path().filename().string());
        }
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

void apply_config_json(const Json& doc, RunConfig& config) {
    if (!doc.is_object()) throw Error("INVALID_CONFIG", "config must be a JSON object");
    auto& o = config.options;
    for (const auto& [key, v] : doc.items()) {
        if (key == "gt") config.gt_dir = text(v, "gt");
        else if (key == "pred") config.pred_dir = text(v, "pred");
        else if (key == "out") config.output_dir = text(v, "out");
        else if (key == "manifest") config.manifest = text(v, "manifest");
        else if (key == "classes") config.classes_file = text(v, "classes");
        else if (key == "images") config.images_dir = text(v, "images");
        else if (key == "seed") {
            if (!v.is_number_unsigned()) throw Error("INVALID_CONFIG", "seed must be a non-negative integer");
            o.seed = v.get<std::uint64_t>();
        } else if (key == "surface_only") o.surface_only = flag(v, "surface_only");
        else if (key == "include_background") o.include_background = flag(v, "include_background");
        else if (key == "empty_policy") {
            const auto p = parse_empty_policy(text(v, "empty_policy"));
            if (!p) throw Error("INVALID_CONFIG", "empty_policy must be score_one or undefined");
            o.empty_policy = *p;
        } else if (key == "undefined_handling") {
            const auto h = parse_handling(text(v, "undefined_handling"));
            if (!h) throw Error("INVALID_CONFIG", "undefined_handling must be skip or propagate");
            o.undefined_handling = *h;
        } else if (key == "thresholds") {
            o.roc_thresholds = positive_count(v, "thresholds");
            if (o.roc_thresholds < 2) throw Error("INVALID_CONFIG", "thresholds must be at least 2");
        } else if (key == "histogram_bins") o.histogram_bins = positive_count(v, "histogram_bins");
        else if (key == "worst_k") o.worst_k = count(v, "worst_k");
        else if (key == "best_k") o.best_k = count(v, "best_k");
        else if (key == "workers") o.workers = positive_count(v, "workers");
        else if (key == "alpha") {
            if (!v.is_number()) throw Error("INVALID_CONFIG", "alpha must be a number");
            config.alpha = v.get<double>();
        } else if (key == "emit") {
            if (!v.is_array()) throw Error("INVALID_CONFIG", "emit must be a list");
            o.emit.clear();
            for (const auto& e : v) o.emit.push_back(text(e, "emit"));
        } else {
            throw Error("INVALID_CONFIG", "unknown config key '" + key + "'");
        }
    }
}

ClassCatalog load_catalog(const fs::path& path) {
    Json doc = read_json_file(path, "class catalog");
    if (doc.is_object() && doc.contains("classes")) doc = doc.at("classes");
    if (!doc.is_array() || doc.empty()) throw Error("INVALID_CATALOG", "class catalog must be a non-empty list");
    std::vector<ClassEntry> entries;
    bool any_background = false;
    for (const auto& c : doc) {
        if (!c.is_object() || !c.contains("id") || !c.at("id").is_number_unsigned()) {
            throw Error("INVALID_CATALOG", "every class needs a non-negative integer id");
        }
        const auto id = c.at("id").get<std::uint64_t>();
        if (id > 65535) throw Error("INVALID_CATALOG", "class id " + std::to_string(id) + " exceeds 65535");
        ClassEntry e;
        e.id = static_cast<ClassId>(id);
        e.name = c.contains("name") ? text(c.at("name"), "name") : "class_" + std::to_string(id);
        e.is_background = c.contains("background") && flag(c.at("background"), "background");
        any_background = any_background || e.is_background;
        entries.push_back(std::move(e));
    }
    if (!any_background) {
        for (auto& e : entries) {
            if (e.id == 0) e.is_background = true;
        }
    }
    return ClassCatalog(std::move(entries));
}

std::vector<SamplePair> pair_by_filename(const fs::path& gt_dir, const fs::path& pred_dir) {
    const auto gts = index_directory(gt_dir, "ground truth");
    const auto preds = index_directory(pred_dir, "prediction");
    std::vector<SamplePair> pairs;
    for (const auto& [stem, pred] : preds) {
        auto it = gts.find(stem);
        pairs.push_back({stem, it == gts.end() ? fs::path{} : it->second, pred});
    }
    return pairs;
}

std::vector<SamplePair> read_manifest(const fs::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw Error("UNREADABLE_FILE", "cannot read manifest " + manifest.string());
    const fs::path base = manifest.parent_path();
    auto resolve = [&](const std::string& p) -> fs::path {
        if (p.empty()) return {};
        const fs::path path(p);
        return path.is_absolute() ? path : base / path;
    };
    std::vector<SamplePair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (line_no == 1 && fields.size() >= 2 && fields[0] == "gt_path" && fields[1] == "pred_path") continue;
        if (fields.size() < 2 || fields.size() > 3 || fields[1].empty()) {
            throw Error("INVALID_MANIFEST", "manifest line " + std::to_string(line_no) +
                                                " must be gt_path,pred_path[,sample_id]");
        }
        SamplePair p;
        p.gt = resolve(fields[0]);
        p.pred = resolve(fields[1]);
        p.sample_id = fields.size() == 3 && !fields[2].empty() ? fields[2] : p.pred.stem().string();
        pairs.push_back(std::move(p));
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const SamplePair& a, const SamplePair& b) { return a.sample_id < b.sample_id; });
    return pairs;
}

}  // namespace segscore::cli

// alticon: context-aware alt-text generation for mobile UI icons during
// development, plus the dataset/metrics harness for evaluating it.

#include <algorithm>
#include <atomic>
#include <csignal>
#include <deque>
#include <map>
#include <mutex>
#include <sstream>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "alticon/backend.hpp"
#include "alticon/config.hpp"
#include "alticon/dataset.hpp"
#include "alticon/evalrun.hpp"
#include "alticon/finetune.hpp"
#include "alticon/image_io.hpp"
#include "alticon/layout_xml.hpp"
#include "alticon/metrics.hpp"
#include "alticon/mock_backend.hpp"
#include "alticon/pipeline.hpp"
#include "alticon/util.hpp"
#include "alticon/watcher.hpp"

namespace fs = std::filesystem;
using namespace alticon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartialFailure = 2;
constexpr int kExitUsage = 64;

std::atomic<bool> g_interrupted{false};

void handle_interrupt(int) { g_interrupted.store(true); }

struct CommonOpts {
    std::string config_path;
    std::string mode = "textt";
    std::string image_scope = "icon";
    std::vector<std::string> ablate;
    std::string cache_dir;
    std::string mock_fixture;
    std::string endpoint;
    std::string model;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool force = false;
    bool dry_run = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--mode", opts.mode, "generation variant: textt or mmt")
        ->check(CLI::IsMember({"textt", "mmt"}));
    cmd->add_option("--image-scope", opts.image_scope, "MMT image input: icon or container")
        ->check(CLI::IsMember({"icon", "container"}));
    cmd->add_option("--ablate", opts.ablate,
                    "withhold context components: ocr, resource-id, parent-sibling")
        ->check(CLI::IsMember({"ocr", "resource-id", "parent-sibling"}));
    cmd->add_option("--cache", opts.cache_dir, "generation cache directory");
    cmd->add_option("--mock", opts.mock_fixture,
                    "run against an in-process mock backend scripted by this fixture file");
    cmd->add_option("--endpoint", opts.endpoint, "chat-completions endpoint override");
    cmd->add_option("--model", opts.model, "model id override");
    cmd->add_option("--seed", opts.seed, "seed for all sampling")->each([&opts](const std::string&) {
        opts.seed_set = true;
    });
    cmd->add_flag("--force", opts.force, "overwrite existing contentDescription attributes");
    cmd->add_flag("--dry-run", opts.dry_run, "print would-be injections without writing");
}

ToolConfig resolve_config(const CommonOpts& opts) {
    ToolConfig config;
    if (!opts.config_path.empty()) {
        config = ToolConfig::load(opts.config_path);
    }
    config.mode = mode_from_names(opts.mode, opts.image_scope);
    for (const std::string& a : opts.ablate) {
        if (a == "ocr") config.ablation.omit_ocr_text = true;
        if (a == "resource-id") config.ablation.omit_resource_id = true;
        if (a == "parent-sibling") config.ablation.omit_parent_sibling = true;
    }
    if (!opts.cache_dir.empty()) config.cache_dir = opts.cache_dir;
    if (!opts.endpoint.empty()) config.backend.endpoint = opts.endpoint;
    if (!opts.model.empty()) config.backend.model = opts.model;
    if (opts.seed_set) config.seed = opts.seed;
    return config;
}

// Holds the client plus the in-process mock server that backs it when
// --mock is given.
struct ClientBundle {
    std::unique_ptr<MockBackend> mock;
    std::unique_ptr<ChatClient> client;
    std::unique_ptr<ResultCache> cache;

    ResultCache* cache_ptr() { return cache.get(); }
};

ClientBundle make_client(ToolConfig& config, const CommonOpts& opts) {
    ClientBundle bundle;
    if (!opts.mock_fixture.empty()) {
        bundle.mock = std::make_unique<MockBackend>(MockFixture::load(opts.mock_fixture));
        bundle.mock->start();
        config.backend.endpoint = bundle.mock->endpoint();
    }
    bundle.client = std::make_unique<ChatClient>(config.backend);
    if (!config.cache_dir.empty()) {
        bundle.cache = std::make_unique<ResultCache>(config.cache_dir);
    }
    return bundle;
}

std::unique_ptr<OcrEngine> make_ocr(const ToolConfig& config) {
    if (config.ocr.command) return std::make_unique<SubprocessOcrEngine>(*config.ocr.command);
    if (config.ocr.url) return std::make_unique<HttpOcrEngine>(*config.ocr.url);
    return nullptr;
}

fs::path project_root_for(const fs::path& layout_file) {
    for (fs::path dir = layout_file.parent_path(); !dir.empty(); dir = dir.parent_path()) {
        if (dir.filename() == "res") return dir.parent_path();
        if (fs::is_directory(dir / "res")) return dir;
        if (dir == dir.parent_path()) break;
    }
    return layout_file.parent_path();
}

std::vector<fs::path> layout_files_under(const fs::path& root) {
    std::vector<fs::path> files;
    std::error_code ec;
    auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied,
                                               ec);
    for (const auto& entry : it) {
        if (entry.is_regular_file(ec) && is_watched_layout_path(entry.path())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

IconDataset load_dataset_or_die(const std::string& path) {
    if (path.empty() || !fs::exists(path)) {
        throw Error(Error::Kind::Io, "dataset manifest not found: " + path);
    }
    return read_manifest(path);
}

ClassTable load_classes(const std::string& path) {
    if (path.empty()) return ClassTable::builtin();
    return ClassTable::load(path);
}

int cmd_annotate(const CommonOpts& opts, const std::string& target,
                 const std::string& project_override) {
    ToolConfig config = resolve_config(opts);
    ClientBundle bundle = make_client(config, opts);
    std::unique_ptr<OcrEngine> ocr = make_ocr(config);
    AnnotatePipeline pipeline(config, *bundle.client, bundle.cache_ptr(), ocr.get());
    AnnotateOptions options{.dry_run = opts.dry_run, .force = opts.force};

    const fs::path target_path(target);
    std::vector<fs::path> files;
    fs::path project_root;
    if (fs::is_directory(target_path)) {
        project_root = target_path;
        files = layout_files_under(target_path);
    } else if (fs::is_regular_file(target_path)) {
        if (!is_watched_layout_path(target_path)) {
            // annotate only ever writes files under res/layout*
            throw Error(Error::Kind::Config,
                        target + " is not an Android layout path (res/layout*/NAME.xml)");
        }
        project_root = project_override.empty() ? project_root_for(target_path)
                                                : fs::path(project_override);
        files = {target_path};
    } else {
        throw Error(Error::Kind::Io, "no such file or directory: " + target);
    }
    if (!project_override.empty()) project_root = project_override;

    AnnotateSummary summary;
    for (const fs::path& file : files) {
        std::vector<IconOutcome> outcomes = pipeline.annotate_file(file, project_root, options);
        summary.outcomes.insert(summary.outcomes.end(),
                                std::make_move_iterator(outcomes.begin()),
                                std::make_move_iterator(outcomes.end()));
    }
    std::cout << summary.table();
    return summary.failed() == 0 ? kExitOk : kExitPartialFailure;
}

int cmd_watch(const CommonOpts& opts, const std::string& root) {
    if (!fs::is_directory(root)) {
        throw Error(Error::Kind::Io, "no such directory: " + root);
    }
    ToolConfig config = resolve_config(opts);
    ClientBundle bundle = make_client(config, opts);
    std::unique_ptr<OcrEngine> ocr = make_ocr(config);
    AnnotatePipeline pipeline(config, *bundle.client, bundle.cache_ptr(), ocr.get());
    const AnnotateOptions options{.dry_run = opts.dry_run, .force = opts.force};
    const fs::path project_root(root);

    struct Job {
        fs::path file;
        IconCandidate icon;
        int attempts = 0;
        std::chrono::steady_clock::time_point not_before;
    };
    std::mutex mu;
    std::deque<Job> queue;

    auto watcher = watch_layouts(
        project_root,
        [&](const WatchEvent& ev) {
            if (ev.kind == WatchEvent::Kind::Diagnostic) {
                std::cout << "[diagnostic] " << ev.file.string() << ": " << ev.message << "\n"
                          << std::flush;
                return;
            }
            std::lock_guard<std::mutex> lock(mu);
            queue.push_back({ev.file, *ev.icon, 0, std::chrono::steady_clock::now()});
        },
        config.watch);

    std::signal(SIGINT, handle_interrupt);
    std::signal(SIGTERM, handle_interrupt);
    std::cout << "watching " << project_root.string() << " (debounce "
              << config.watch.debounce.count() << " ms)\n"
              << std::flush;

    while (!g_interrupted.load()) {
        std::optional<Job> job;
        {
            std::lock_guard<std::mutex> lock(mu);
            if (!queue.empty() && queue.front().not_before <= std::chrono::steady_clock::now()) {
                job = std::move(queue.front());
                queue.pop_front();
            }
        }
        if (!job) {
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
            continue;
        }
        IconOutcome outcome =
            pipeline.annotate_icon(job->file, project_root, job->icon, options);
        if (outcome.ok() || outcome.skipped_existing) {
            std::cout << AnnotateSummary{{outcome}}.table() << std::flush;
        } else if (job->attempts + 1 < 5) {
            // backend outages queue a retry; the watcher itself never dies
            Job retry = *job;
            retry.attempts += 1;
            retry.not_before = std::chrono::steady_clock::now() +
                               std::chrono::milliseconds(500 * (1 << retry.attempts));
            std::cout << "[retry " << retry.attempts << "] " << outcome.icon_name << ": "
                      << outcome.error << "\n"
                      << std::flush;
            std::lock_guard<std::mutex> lock(mu);
            queue.push_back(std::move(retry));
        } else {
            std::cout << "[failed] " << outcome.icon_name << ": " << outcome.error << "\n"
                      << std::flush;
        }
    }
    watcher->stop();
    std::cout << "stopped\n";
    return kExitOk;
}

int cmd_extract(const std::string& layout, const std::string& activity) {
    const std::string bytes = read_file(layout);
    const LayoutDocument doc = parse_layout(
        bytes, activity.empty() ? std::nullopt : std::optional<std::string>(activity), layout);
    for (const IconCandidate& candidate : detect_icons(doc.screen)) {
        const IconContext ctx = extract_context(doc.screen, candidate);
        std::cout << (candidate.node.resource_id ? *candidate.node.resource_id
                                                 : candidate.node.class_name)
                  << ":\n"
                  << canonical_context_json(ctx) << "\n";
    }
    return kExitOk;
}

int cmd_stats(const CommonOpts& opts, const std::string& rico_dir, const std::string& captions,
              const std::string& splits, const std::string& screenshots, bool embed_icons,
              bool r1, const std::string& out_manifest) {
    ToolConfig config = resolve_config(opts);
    if (!fs::is_directory(rico_dir)) {
        throw Error(Error::Kind::Io, "no such directory: " + rico_dir);
    }

    std::vector<Screen> screens;
    std::vector<fs::path> docs;
    for (const auto& entry : fs::directory_iterator(rico_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            docs.push_back(entry.path());
        }
    }
    std::sort(docs.begin(), docs.end());
    for (const fs::path& doc_path : docs) {
        const ordered_json doc = ordered_json::parse(read_file(doc_path));
        screens.push_back(load_rico_screen(doc, doc_path.stem().string()));
        if (!screenshots.empty()) {
            for (const char* ext : {".png", ".jpg", ".webp"}) {
                const fs::path shot = fs::path(screenshots) / (doc_path.stem().string() + ext);
                if (fs::exists(shot) && screens.back().screen_dims) {
                    screens.back().screenshot_path = shot.string();
                    break;
                }
            }
        }
    }

    DiagnosticSink diags;
    IconDataset dataset = build_icon_dataset(screens, load_captions(captions),
                                             load_splits(splits), config.size_filter, &diags);
    if (r1) sample_r1(dataset, config.seed);

    if (embed_icons) {
        std::map<std::string, const Screen*> by_id;
        for (const Screen& s : screens) by_id[s.screen_id] = &s;
        for (AnnotatedIcon& icon : dataset.icons) {
            const Screen* screen = by_id.at(icon.screen_id);
            if (!screen->screenshot_path) continue;
            const Image shot = load_image(*screen->screenshot_path);
            const Image crop = crop_icon(shot, icon.bounds);
            const std::vector<std::uint8_t> png = encode_png(standardize(crop));
            icon.icon_png_base64 = base64_encode(png.data(), png.size());

            // container variant: parent bounds with the icon red-boxed
            std::vector<int> parent_path = icon.path;
            if (!parent_path.empty()) {
                parent_path.pop_back();
                const ViewNode& parent = node_at_path(*screen, parent_path);
                if (parent.bounds && parent.bounds->valid()) {
                    const Image container = crop_icon(shot, *parent.bounds);
                    const BoundingBox rel{icon.bounds.left - parent.bounds->left,
                                          icon.bounds.top - parent.bounds->top,
                                          icon.bounds.right - parent.bounds->left,
                                          icon.bounds.bottom - parent.bounds->top};
                    const Image marked = mark_bbox(container, rel);
                    const std::vector<std::uint8_t> cpng = encode_png(standardize(marked));
                    icon.container_png_base64 = base64_encode(cpng.data(), cpng.size());
                }
            }
        }
    }

    if (!out_manifest.empty()) {
        write_manifest(dataset, out_manifest);
    }
    for (const Diagnostic& d : diags) {
        std::cerr << "[" << d.where << "] " << d.message << "\n";
    }
    std::cout << dataset.stats.to_json().dump(2) << "\n";
    return kExitOk;
}

std::vector<metrics::EvalRecord> read_predictions(const std::string& path,
                                                  const IconDataset* dataset) {
    std::map<std::string, const AnnotatedIcon*> by_ref;
    if (dataset != nullptr) {
        for (const AnnotatedIcon& icon : dataset->icons) by_ref[icon.icon_ref] = &icon;
    }
    std::vector<metrics::EvalRecord> records;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (is_blank(line)) continue;
        const ordered_json doc = ordered_json::parse(line);
        metrics::EvalRecord record;
        record.icon_ref = doc.value("icon_ref", std::string{});
        record.candidate = doc.value("candidate", std::string{});
        if (doc.contains("references")) {
            record.references = doc["references"].get<std::vector<std::string>>();
        } else if (const auto it = by_ref.find(record.icon_ref); it != by_ref.end()) {
            record.references = it->second->labels;
        }
        records.push_back(std::move(record));
    }
    return records;
}

int cmd_eval(const CommonOpts& opts, const std::string& dataset_path,
             const std::string& predictions, bool generate, const std::string& split,
             const std::string& out_path, const std::string& synonyms_path) {
    ToolConfig config = resolve_config(opts);

    metrics::EvalConfig eval_config;
    if (!synonyms_path.empty()) {
        eval_config.synonyms = metrics::SynonymTable::load(synonyms_path);
        eval_config.synonyms_source = synonyms_path;
    }

    std::optional<IconDataset> dataset;
    if (!dataset_path.empty()) {
        dataset = load_dataset_or_die(dataset_path);
        if (split != "all") {
            const Split wanted = split_from_name(split);
            IconDataset filtered;
            for (AnnotatedIcon& icon : dataset->icons) {
                if (icon.split == wanted) filtered.icons.push_back(std::move(icon));
            }
            dataset = std::move(filtered);
        }
    }

    std::vector<metrics::EvalRecord> records;
    ordered_json costs;
    if (generate) {
        if (!dataset) {
            throw Error(Error::Kind::Io, "--generate needs --dataset");
        }
        ClientBundle bundle = make_client(config, opts);
        GenerationRun run = generate_candidates(*dataset, config.mode, config.ablation,
                                                *bundle.client, bundle.cache_ptr(),
                                                config.templates);
        records = std::move(run.records);
        costs = account_costs(run.results).to_json();
        eval_config.extra_echo["mode"] = mode_name(config.mode);
        eval_config.extra_echo["model"] = config.backend.model;
        eval_config.extra_echo["templates"] = config.templates.version;
        eval_config.extra_echo["textt_label_fallbacks"] = run.label_fallbacks;
    } else if (!predictions.empty()) {
        records = read_predictions(predictions, dataset ? &*dataset : nullptr);
    } else {
        throw Error(Error::Kind::Io, "eval needs --predictions or --generate");
    }
    eval_config.extra_echo["ablation"] = {
        {"omit_ocr_text", config.ablation.omit_ocr_text},
        {"omit_resource_id", config.ablation.omit_resource_id},
        {"omit_parent_sibling", config.ablation.omit_parent_sibling}};

    const metrics::MetricReport report = metrics::evaluate(records, eval_config);
    ordered_json out = report.to_json();
    if (!costs.is_null()) out["costs"] = costs;
    if (!out_path.empty()) {
        write_file(out_path, out.dump(2) + "\n");
    }
    std::cout << report.table();
    return kExitOk;
}

int cmd_ablate(const CommonOpts& opts, const std::string& dataset_path,
               const std::vector<std::string>& mode_names, const std::string& out_path) {
    ToolConfig config = resolve_config(opts);
    IconDataset dataset = load_dataset_or_die(dataset_path);

    std::vector<GenerationMode> modes;
    for (const std::string& name : mode_names) {
        if (name == "textt") modes.push_back({Variant::TextT, ImageScope::Icon});
        else if (name == "mmt_i") modes.push_back({Variant::MMT, ImageScope::Icon});
        else if (name == "mmt_c") modes.push_back({Variant::MMT, ImageScope::Container});
        else throw Error(Error::Kind::Config, "unknown mode '" + name + "'");
    }

    ClientBundle bundle = make_client(config, opts);
    const AblationReport report =
        run_ablation_suite(dataset, modes, default_ablation_rows(), *bundle.client,
                           bundle.cache_ptr(), config.templates);
    if (!out_path.empty()) {
        write_file(out_path, report.to_json().dump(2) + "\n");
    }
    std::cout << report.table();
    for (const AblationCell& cell : report.cells) {
        if (!cell.ok()) return kExitPartialFailure;
    }
    return kExitOk;
}

int cmd_export_finetune(const CommonOpts& opts, const std::string& dataset_path,
                        const std::string& out_path, const std::string& sidecar_path,
                        const std::string& classes_path, int cap) {
    ToolConfig config = resolve_config(opts);
    const IconDataset dataset = load_dataset_or_die(dataset_path);
    const ClassTable classes = load_classes(classes_path);

    const std::vector<AnnotatedIcon> subset =
        sample_finetune_subset(dataset, classes, cap, config.seed);

    ClientBundle bundle;  // created lazily; only TextT label inference needs it

    std::vector<FinetuneExample> records;
    records.reserve(subset.size());
    for (const AnnotatedIcon& icon : subset) {
        FinetuneExample record;
        record.context = icon.context;
        if (icon.labels.size() != 1) {
            throw Error(Error::Kind::Validation,
                        "icon '" + icon.icon_ref +
                            "' carries " + std::to_string(icon.labels.size()) +
                            " labels; fine-tune export needs an r1-sampled manifest (stats --r1)");
        }
        record.label = icon.labels.front();
        record.icon_class = assign_icon_class(icon.context.ui_element_info.resource_id, classes);
        if (config.mode.variant == Variant::TextT && !record.context.icon_label) {
            if (!icon.icon_png_base64) {
                throw Error(Error::Kind::Validation,
                            "icon '" + icon.icon_ref +
                                "' has no icon label and no embedded image to classify; rebuild "
                                "the manifest with --embed-icons");
            }
            if (!bundle.client) bundle = make_client(config, opts);
            record.context.icon_label = classify_icon(
                decode_image(base64_decode(*icon.icon_png_base64)), *bundle.client, nullptr,
                config.templates);
        }
        if (config.mode.variant == Variant::MMT) {
            const std::optional<std::string>& b64 = config.mode.image_scope == ImageScope::Icon
                                                        ? icon.icon_png_base64
                                                        : icon.container_png_base64;
            if (!b64) {
                throw Error(Error::Kind::Validation,
                            "icon '" + icon.icon_ref +
                                "' has no embedded image; rebuild the manifest with --embed-icons");
            }
            record.image = decode_image(base64_decode(*b64));
        }
        records.push_back(std::move(record));
    }

    FinetuneExportConfig export_config;
    export_config.per_class_cap = cap;
    export_config.seed = config.seed;
    const fs::path sidecar = sidecar_path.empty()
                                 ? fs::path(out_path).replace_extension(".config.json")
                                 : fs::path(sidecar_path);
    export_finetune_dataset(records, config.mode, out_path, sidecar, export_config,
                            config.templates);
    std::cout << "exported " << records.size() << " records to " << out_path << "\n";
    return kExitOk;
}

int cmd_mock_backend(const std::string& fixture, int port) {
    MockBackend backend(MockFixture::load(fixture));
    backend.start(port);
    std::signal(SIGINT, handle_interrupt);
    std::signal(SIGTERM, handle_interrupt);
    std::cout << "mock backend listening on " << backend.endpoint() << "\n" << std::flush;
    while (!g_interrupted.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    backend.stop();
    std::cout << "served " << backend.request_count() << " request(s)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"context-aware alt-text for mobile UI icons"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* annotate = app.add_subcommand("annotate", "annotate icons in a layout file or project");
    std::string annotate_target;
    std::string annotate_project;
    annotate->add_option("path", annotate_target, "layout file or project root")->required();
    annotate->add_option("--project", annotate_project, "project root for drawable resolution");
    add_common(annotate, opts);

    auto* watch = app.add_subcommand("watch", "watch a project and annotate newly added icons");
    std::string watch_root;
    watch->add_option("root", watch_root, "project root")->required();
    add_common(watch, opts);

    auto* extract = app.add_subcommand("extract", "print each icon's extracted context");
    std::string extract_layout;
    std::string extract_activity;
    extract->add_option("layout", extract_layout, "layout XML file")->required();
    extract->add_option("--activity", extract_activity, "activity name override");

    auto* stats = app.add_subcommand("stats", "build the icon dataset and report its counts");
    std::string rico_dir, captions_path, splits_path, screenshots_dir, manifest_out;
    bool embed_icons = false;
    bool r1 = false;
    stats->add_option("--rico", rico_dir, "directory of Rico view-hierarchy JSON files")
        ->required();
    stats->add_option("--captions", captions_path, "caption TSV file")->required();
    stats->add_option("--splits", splits_path, "split TSV file")->required();
    stats->add_option("--screenshots", screenshots_dir, "directory of screen PNGs");
    stats->add_flag("--embed-icons", embed_icons, "embed standardized icon crops in the manifest");
    stats->add_flag("--r1", r1, "keep one random label per train/valid icon");
    stats->add_option("--out", manifest_out, "write the dataset manifest (JSONL)");
    add_common(stats, opts);

    auto* eval = app.add_subcommand("eval", "score candidates against reference labels");
    std::string eval_dataset, eval_predictions, eval_split = "all", eval_out, eval_synonyms;
    bool eval_generate = false;
    eval->add_option("--dataset", eval_dataset, "dataset manifest (JSONL)");
    eval->add_option("--predictions", eval_predictions,
                     "JSONL of {icon_ref, candidate, references[]}");
    eval->add_flag("--generate", eval_generate, "generate candidates via the backend first");
    eval->add_option("--split", eval_split, "restrict to a split: train, valid, test, all")
        ->check(CLI::IsMember({"train", "valid", "test", "all"}));
    eval->add_option("--out", eval_out, "write the metric report JSON here");
    eval->add_option("--synonyms", eval_synonyms, "METEOR-lite synonym table file");
    add_common(eval, opts);

    auto* ablate = app.add_subcommand("ablate", "run the input-ablation grid");
    std::string ablate_dataset, ablate_out;
    std::vector<std::string> ablate_modes{"textt", "mmt_i"};
    ablate->add_option("--dataset", ablate_dataset, "dataset manifest (JSONL)")->required();
    ablate->add_option("--modes", ablate_modes, "grid columns: textt, mmt_i, mmt_c");
    ablate->add_option("--out", ablate_out, "write the grid report JSON here");
    add_common(ablate, opts);

    auto* exportft = app.add_subcommand("export-finetune", "export chat-format fine-tune data");
    std::string ft_dataset, ft_out, ft_sidecar, ft_classes;
    int ft_cap = 15;
    exportft->add_option("--dataset", ft_dataset, "dataset manifest (JSONL)")->required();
    exportft->add_option("--out", ft_out, "output JSONL path")->required();
    exportft->add_option("--sidecar", ft_sidecar, "sidecar config JSON path");
    exportft->add_option("--classes", ft_classes, "icon class keyword table (JSON)");
    exportft->add_option("--cap", ft_cap, "per-class sample cap");
    add_common(exportft, opts);

    auto* mock = app.add_subcommand("mock-backend", "run the scripted chat-completions server");
    std::string mock_fixture_path;
    int mock_port = 0;
    mock->add_option("--fixture", mock_fixture_path, "fixture JSON file")->required();
    mock->add_option("--port", mock_port, "port (0 = ephemeral)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (annotate->parsed()) return cmd_annotate(opts, annotate_target, annotate_project);
        if (watch->parsed()) return cmd_watch(opts, watch_root);
        if (extract->parsed()) return cmd_extract(extract_layout, extract_activity);
        if (stats->parsed()) {
            return cmd_stats(opts, rico_dir, captions_path, splits_path, screenshots_dir,
                             embed_icons, r1, manifest_out);
        }
        if (eval->parsed()) {
            return cmd_eval(opts, eval_dataset, eval_predictions, eval_generate, eval_split,
                            eval_out, eval_synonyms);
        }
        if (ablate->parsed()) return cmd_ablate(opts, ablate_dataset, ablate_modes, ablate_out);
        if (exportft->parsed()) {
            return cmd_export_finetune(opts, ft_dataset, ft_out, ft_sidecar, ft_classes, ft_cap);
        }
        if (mock->parsed()) return cmd_mock_backend(mock_fixture_path, mock_port);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == Error::Kind::Io || e.kind() == Error::Kind::Config
                   ? kExitUsage
                   : kExitPartialFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPartialFailure;
    }
    return kExitUsage;
}

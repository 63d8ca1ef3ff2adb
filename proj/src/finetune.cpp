#include "alticon/finetune.hpp"

#include <map>

#include "alticon/error.hpp"
#include "alticon/image_io.hpp"
#include "alticon/util.hpp"

namespace alticon {

void export_finetune_dataset(std::span<const FinetuneExample> records, GenerationMode mode,
                             const std::filesystem::path& out_jsonl,
                             const std::filesystem::path& sidecar_json,
                             const FinetuneExportConfig& config,
                             const PromptTemplates& templates) {
    std::map<std::string, int> per_class;
    for (const FinetuneExample& record : records) {
        const int count = ++per_class[record.icon_class];
        if (count > config.per_class_cap) {
            throw Error(Error::Kind::Validation,
                        "fine-tune export: class '" + record.icon_class + "' has more than " +
                            std::to_string(config.per_class_cap) + " records");
        }
    }

    std::string lines;
    for (const FinetuneExample& record : records) {
        const PromptPayload payload = build_prompt(record.context, mode, {}, templates);

        ordered_json user;
        user["role"] = "user";
        if (mode.variant == Variant::MMT) {
            if (!record.image) {
                throw Error(Error::Kind::Validation,
                            "fine-tune export: MMT record is missing its icon image");
            }
            const std::vector<std::uint8_t> png = encode_png(*record.image);
            ordered_json parts = ordered_json::array();
            parts.push_back({{"type", "text"}, {"text", payload.text}});
            parts.push_back(
                {{"type", "image_url"},
                 {"image_url",
                  {{"url", "data:image/png;base64," + base64_encode(png.data(), png.size())}}}});
            user["content"] = std::move(parts);
        } else {
            user["content"] = payload.text;
        }

        ordered_json assistant;
        assistant["role"] = "assistant";
        assistant["content"] = record.label;

        ordered_json line;
        line["messages"] = ordered_json::array({std::move(user), std::move(assistant)});
        lines += line.dump();
        lines += "\n";
    }
    write_file(out_jsonl, lines);

    ordered_json sidecar;
    sidecar["mode"] = mode_name(mode);
    sidecar["epochs"] = config.epochs;
    sidecar["per_class_cap"] = config.per_class_cap;
    sidecar["sampling"] = config.sampling;
    sidecar["seed"] = config.seed;
    sidecar["records"] = records.size();
    sidecar["classes"] = ordered_json::object();
    for (const auto& [name, count] : per_class) {
        sidecar["classes"][name] = count;
    }
    sidecar["prompt_templates"] = templates.version;
    write_file(sidecar_json, sidecar.dump(2) + "\n");
}

}  // namespace alticon

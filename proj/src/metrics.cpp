#include "alticon/metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "alticon/error.hpp"
#include "alticon/util.hpp"

namespace alticon::metrics {
namespace {

constexpr int kMaxCiderOrder = 4;
constexpr double kRougeBeta = 1.2;
constexpr double kMeteorAlpha = 0.9;
constexpr double kMeteorGamma = 0.5;
constexpr double kMeteorBeta = 3.0;

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts ngram_counts(const TokenSeq& tokens, int n) {
    NgramCounts counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)] += 1;
    }
    return counts;
}

// Clipped matches for one order: candidate counts capped by the maximum
// count of that n-gram across the references.
long long clipped_matches(const NgramCounts& cand, const std::vector<NgramCounts>& refs) {
    long long matched = 0;
    for (const auto& [gram, count] : cand) {
        int best = 0;
        for (const NgramCounts& ref : refs) {
            auto it = ref.find(gram);
            if (it != ref.end()) best = std::max(best, it->second);
        }
        matched += std::min(count, best);
    }
    return matched;
}

long long total_count(const NgramCounts& counts) {
    long long total = 0;
    for (const auto& [gram, count] : counts) total += count;
    return total;
}

// Closest reference length; ties resolved toward the shorter reference.
std::size_t closest_ref_len(std::size_t cand_len, const std::vector<TokenSeq>& refs) {
    std::size_t best = refs.front().size();
    for (const TokenSeq& ref : refs) {
        const auto diff = [cand_len](std::size_t len) {
            return len > cand_len ? len - cand_len : cand_len - len;
        };
        if (diff(ref.size()) < diff(best) || (diff(ref.size()) == diff(best) && ref.size() < best)) {
            best = ref.size();
        }
    }
    return best;
}

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

struct Alignment {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (cand idx, ref idx)
};

// Staged greedy alignment: each stage walks the candidate left to right
// and pairs an unmatched token with the leftmost unmatched compatible
// reference token.
Alignment align(const TokenSeq& cand, const TokenSeq& ref, const SynonymTable& synonyms) {
    Alignment out;
    std::vector<bool> cand_used(cand.size(), false);
    std::vector<bool> ref_used(ref.size(), false);

    const auto run_stage = [&](auto&& related) {
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (cand_used[i]) continue;
            for (std::size_t j = 0; j < ref.size(); ++j) {
                if (ref_used[j]) continue;
                if (related(cand[i], ref[j])) {
                    cand_used[i] = true;
                    ref_used[j] = true;
                    out.pairs.emplace_back(i, j);
                    break;
                }
            }
        }
    };

    run_stage([](const std::string& a, const std::string& b) { return a == b; });
    run_stage([](const std::string& a, const std::string& b) {
        return light_stem(a) == light_stem(b);
    });
    if (!synonyms.empty()) {
        run_stage([&synonyms](const std::string& a, const std::string& b) {
            return synonyms.related(a, b);
        });
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

std::size_t chunk_count(const Alignment& alignment) {
    std::size_t chunks = 0;
    for (std::size_t k = 0; k < alignment.pairs.size(); ++k) {
        if (k == 0 || alignment.pairs[k].first != alignment.pairs[k - 1].first + 1 ||
            alignment.pairs[k].second != alignment.pairs[k - 1].second + 1) {
            ++chunks;
        }
    }
    return chunks;
}

}  // namespace

TokenSeq tokenize(std::string_view s) {
    TokenSeq out;
    std::string token;
    const auto flush = [&out, &token]() {
        std::size_t begin = 0;
        std::size_t end = token.size();
        while (begin < end && std::ispunct(static_cast<unsigned char>(token[begin]))) ++begin;
        while (end > begin && std::ispunct(static_cast<unsigned char>(token[end - 1]))) --end;
        if (end > begin) out.push_back(token.substr(begin, end - begin));
        token.clear();
    };
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    flush();
    return out;
}

double bleu_n(const TokenSeq& candidate, const std::vector<TokenSeq>& refs, int n) {
    if (n < 1 || n > 2) {
        throw Error(Error::Kind::Validation, "bleu_n supports n = 1 or 2");
    }
    if (refs.empty()) {
        throw Error(Error::Kind::Validation, "bleu_n needs at least one reference");
    }
    if (candidate.empty()) return 0.0;

    double log_sum = 0.0;
    for (int order = 1; order <= n; ++order) {
        const NgramCounts cand_counts = ngram_counts(candidate, order);
        std::vector<NgramCounts> ref_counts;
        ref_counts.reserve(refs.size());
        for (const TokenSeq& ref : refs) ref_counts.push_back(ngram_counts(ref, order));
        const long long total = total_count(cand_counts);
        if (total == 0) return 0.0;
        const long long matched = clipped_matches(cand_counts, ref_counts);
        if (matched == 0) return 0.0;
        log_sum += std::log(static_cast<double>(matched) / static_cast<double>(total)) / n;
    }

    const std::size_t c = candidate.size();
    const std::size_t r = closest_ref_len(c, refs);
    const double bp = c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / c);
    return bp * std::exp(log_sum);
}

double rouge_l(const TokenSeq& candidate, const std::vector<TokenSeq>& refs) {
    if (refs.empty()) {
        throw Error(Error::Kind::Validation, "rouge_l needs at least one reference");
    }
    if (candidate.empty()) return 0.0;
    const double beta2 = kRougeBeta * kRougeBeta;
    double best = 0.0;
    for (const TokenSeq& ref : refs) {
        if (ref.empty()) continue;
        const double lcs = static_cast<double>(lcs_length(candidate, ref));
        if (lcs == 0.0) continue;
        const double recall = lcs / ref.size();
        const double precision = lcs / candidate.size();
        const double f =
            (1.0 + beta2) * recall * precision / (recall + beta2 * precision);
        best = std::max(best, f);
    }
    return best;
}

SynonymTable SynonymTable::load(const std::filesystem::path& path) {
    SynonymTable table;
    std::istringstream in(read_file(path));
    std::string line;
    int group = 0;
    while (std::getline(in, line)) {
        if (is_blank(line) || line[0] == '#') continue;
        std::istringstream words(line);
        std::string word;
        bool any = false;
        while (words >> word) {
            table.group_of[to_lower(word)] = group;
            any = true;
        }
        if (any) ++group;
    }
    return table;
}

bool SynonymTable::related(const std::string& a, const std::string& b) const {
    const auto ia = group_of.find(a);
    if (ia == group_of.end()) return false;
    const auto ib = group_of.find(b);
    return ib != group_of.end() && ia->second == ib->second;
}

std::string light_stem(std::string_view word) {
    std::string w(word);
    const auto strip = [&w](std::string_view suffix) {
        if (w.size() > suffix.size() && w.size() - suffix.size() >= 2 &&
            ends_with(w, suffix)) {
            w.resize(w.size() - suffix.size());
            return true;
        }
        return false;
    };
    if (!strip("ing")) {
        if (!strip("ed")) {
            if (!strip("es")) strip("s");
        }
    }
    if (w.size() >= 3 && w.back() == 'e') w.pop_back();
    return w;
}

double meteor_lite(const TokenSeq& candidate, const std::vector<TokenSeq>& refs,
                   const SynonymTable& synonyms) {
    if (refs.empty()) {
        throw Error(Error::Kind::Validation, "meteor_lite needs at least one reference");
    }
    if (candidate.empty()) return 0.0;
    double best = 0.0;
    for (const TokenSeq& ref : refs) {
        if (ref.empty()) continue;
        const Alignment alignment = align(candidate, ref, synonyms);
        const double matches = static_cast<double>(alignment.pairs.size());
        if (matches == 0.0) continue;
        const double precision = matches / candidate.size();
        const double recall = matches / ref.size();
        const double f_mean =
            precision * recall / (kMeteorAlpha * precision + (1.0 - kMeteorAlpha) * recall);
        const double frag = static_cast<double>(chunk_count(alignment)) / matches;
        const double penalty = kMeteorGamma * std::pow(frag, kMeteorBeta);
        best = std::max(best, f_mean * (1.0 - penalty));
    }
    return best;
}

std::vector<double> cider(
    const std::vector<std::pair<TokenSeq, std::vector<TokenSeq>>>& corpus,
    const CiderParams& params) {
    if (corpus.empty()) return {};
    const double n_docs = static_cast<double>(corpus.size());

    // Document frequency: the number of corpus items whose reference set
    // contains the n-gram.
    std::map<std::vector<std::string>, double> df;
    for (const auto& [cand, refs] : corpus) {
        std::set<std::vector<std::string>> seen;
        for (const TokenSeq& ref : refs) {
            for (int n = 1; n <= kMaxCiderOrder; ++n) {
                for (const auto& [gram, count] : ngram_counts(ref, n)) seen.insert(gram);
            }
        }
        for (const auto& gram : seen) df[gram] += 1.0;
    }

    const auto idf = [&](const std::vector<std::string>& gram) {
        const auto it = df.find(gram);
        const double freq = it == df.end() ? 1.0 : std::max(1.0, it->second);
        return std::log((n_docs + params.epsilon) / freq);
    };

    struct WeightedVec {
        std::array<std::map<std::vector<std::string>, double>, kMaxCiderOrder> by_order;
        std::array<double, kMaxCiderOrder> norm{};
        std::size_t length = 0;
    };
    const auto weigh = [&](const TokenSeq& tokens) {
        WeightedVec vec;
        vec.length = tokens.size();
        for (int n = 1; n <= kMaxCiderOrder; ++n) {
            auto& slot = vec.by_order[n - 1];
            double norm_sq = 0.0;
            for (const auto& [gram, count] : ngram_counts(tokens, n)) {
                const double weighted = count * idf(gram);
                slot[gram] = weighted;
                norm_sq += weighted * weighted;
            }
            vec.norm[n - 1] = std::sqrt(norm_sq);
        }
        return vec;
    };

    std::vector<double> scores;
    scores.reserve(corpus.size());
    for (const auto& [cand, refs] : corpus) {
        const WeightedVec cand_vec = weigh(cand);
        double item_score = 0.0;
        for (const TokenSeq& ref : refs) {
            const WeightedVec ref_vec = weigh(ref);
            const double delta = static_cast<double>(cand_vec.length) -
                                 static_cast<double>(ref_vec.length);
            const double length_penalty =
                std::exp(-(delta * delta) / (2.0 * params.sigma * params.sigma));
            double sum_over_n = 0.0;
            for (int n = 0; n < kMaxCiderOrder; ++n) {
                double val = 0.0;
                for (const auto& [gram, cand_w] : cand_vec.by_order[n]) {
                    const auto it = ref_vec.by_order[n].find(gram);
                    if (it == ref_vec.by_order[n].end()) continue;
                    val += std::min(cand_w, it->second) * it->second;  // CIDEr-D clipping
                }
                if (cand_vec.norm[n] > 0.0 && ref_vec.norm[n] > 0.0) {
                    val /= cand_vec.norm[n] * ref_vec.norm[n];
                } else {
                    val = 0.0;
                }
                sum_over_n += val * length_penalty;
            }
            item_score += sum_over_n / kMaxCiderOrder;
        }
        scores.push_back(10.0 * item_score / static_cast<double>(refs.size()));
    }
    return scores;
}

ordered_json MetricReport::to_json() const {
    ordered_json j;
    j["counts"] = {{"items", items.size()}, {"references", reference_count}};
    j["corpus"] = {{"bleu1", corpus_bleu1},
                   {"bleu2", corpus_bleu2},
                   {"rouge_l", corpus_rouge_l},
                   {"meteor_lite", corpus_meteor_lite},
                   {"cider", corpus_cider},
                   {"spice", "n/a"}};
    j["config"] = config_echo;
    ordered_json rows = ordered_json::array();
    for (const ItemScores& item : items) {
        rows.push_back({{"icon_ref", item.icon_ref},
                        {"bleu1", item.bleu1},
                        {"bleu2", item.bleu2},
                        {"rouge_l", item.rouge_l},
                        {"meteor_lite", item.meteor_lite},
                        {"cider", item.cider}});
    }
    j["items"] = std::move(rows);
    return j;
}

std::string MetricReport::table() const {
    std::ostringstream out;
    out << "items: " << items.size() << "  references: " << reference_count << "\n";
    out << "metric        corpus\n";
    const auto row = [&out](const char* name, double value) {
        out << name;
        for (std::size_t i = std::string(name).size(); i < 14; ++i) out << ' ';
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", value);
        out << buf << "\n";
    };
    row("bleu1", corpus_bleu1);
    row("bleu2", corpus_bleu2);
    row("rouge_l", corpus_rouge_l);
    row("meteor_lite", corpus_meteor_lite);
    row("cider", corpus_cider);
    out << "spice         n/a\n";
    return out.str();
}

MetricReport evaluate(const std::vector<EvalRecord>& records, const EvalConfig& config) {
    if (records.empty()) {
        throw Error(Error::Kind::Validation, "evaluate: no records");
    }

    std::vector<TokenSeq> candidates;
    std::vector<std::vector<TokenSeq>> references;
    candidates.reserve(records.size());
    references.reserve(records.size());
    int reference_count = 0;
    for (const EvalRecord& record : records) {
        if (record.references.empty()) {
            throw Error(Error::Kind::Validation,
                        "evaluate: record '" + record.icon_ref + "' has no references");
        }
        candidates.push_back(tokenize(record.candidate));
        std::vector<TokenSeq> refs;
        for (const std::string& ref : record.references) refs.push_back(tokenize(ref));
        reference_count += static_cast<int>(refs.size());
        references.push_back(std::move(refs));
    }

    std::vector<std::pair<TokenSeq, std::vector<TokenSeq>>> cider_corpus;
    cider_corpus.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        cider_corpus.emplace_back(candidates[i], references[i]);
    }
    const std::vector<double> cider_scores = cider(cider_corpus, config.cider);

    MetricReport report;
    report.reference_count = reference_count;
    report.items.reserve(records.size());

    // Corpus BLEU accumulators: clipped matches and totals per order, plus
    // summed candidate and closest-reference lengths for the penalty.
    std::array<long long, 2> corpus_matched{0, 0};
    std::array<long long, 2> corpus_total{0, 0};
    long long corpus_cand_len = 0;
    long long corpus_ref_len = 0;

    double rouge_sum = 0.0;
    double meteor_sum = 0.0;
    double cider_sum = 0.0;

    for (std::size_t i = 0; i < records.size(); ++i) {
        const TokenSeq& cand = candidates[i];
        const std::vector<TokenSeq>& refs = references[i];

        ItemScores item;
        item.icon_ref = records[i].icon_ref;
        item.bleu1 = bleu_n(cand, refs, 1);
        item.bleu2 = bleu_n(cand, refs, 2);
        item.rouge_l = rouge_l(cand, refs);
        item.meteor_lite = meteor_lite(cand, refs, config.synonyms);
        item.cider = cider_scores[i];
        rouge_sum += item.rouge_l;
        meteor_sum += item.meteor_lite;
        cider_sum += item.cider;
        report.items.push_back(std::move(item));

        for (int order = 1; order <= 2; ++order) {
            const NgramCounts cand_counts = ngram_counts(cand, order);
            std::vector<NgramCounts> ref_counts;
            for (const TokenSeq& ref : refs) ref_counts.push_back(ngram_counts(ref, order));
            corpus_matched[order - 1] += clipped_matches(cand_counts, ref_counts);
            corpus_total[order - 1] += total_count(cand_counts);
        }
        corpus_cand_len += static_cast<long long>(cand.size());
        corpus_ref_len += static_cast<long long>(closest_ref_len(cand.size(), refs));
    }

    const auto corpus_bleu = [&](int n) {
        double log_sum = 0.0;
        for (int order = 1; order <= n; ++order) {
            if (corpus_total[order - 1] == 0 || corpus_matched[order - 1] == 0) return 0.0;
            log_sum += std::log(static_cast<double>(corpus_matched[order - 1]) /
                                static_cast<double>(corpus_total[order - 1])) /
                       n;
        }
        const double bp = corpus_cand_len >= corpus_ref_len
                              ? 1.0
                              : std::exp(1.0 - static_cast<double>(corpus_ref_len) /
                                                   static_cast<double>(corpus_cand_len));
        return bp * std::exp(log_sum);
    };
    report.corpus_bleu1 = corpus_bleu(1);
    report.corpus_bleu2 = corpus_bleu(2);
    report.corpus_rouge_l = rouge_sum / static_cast<double>(records.size());
    report.corpus_meteor_lite = meteor_sum / static_cast<double>(records.size());
    report.corpus_cider = cider_sum / static_cast<double>(records.size());

    report.config_echo = ordered_json::object();
    report.config_echo["tokenizer"] = std::string(kTokenizerVersion);
    report.config_echo["cider_sigma"] = config.cider.sigma;
    report.config_echo["cider_epsilon"] = config.cider.epsilon;
    report.config_echo["cider_idf"] = "self-corpus";
    report.config_echo["synonyms"] = config.synonyms_source;
    for (auto it = config.extra_echo.begin(); it != config.extra_echo.end(); ++it) {
        report.config_echo[it.key()] = it.value();
    }
    return report;
}

}  // namespace alticon::metrics

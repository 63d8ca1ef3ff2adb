#pragma once

// Independent brute-force oracles for the caption metrics. These stay
// deliberately naive (string-keyed n-gram maps, bitmask subsequence
// enumeration, direct cosine arithmetic) and share no code with the
// library implementations they check.

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracles {

using Tokens = std::vector<std::string>;

inline std::string join(const Tokens& tokens, std::size_t begin, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) out += "\x1f";
        out += tokens[begin + i];
    }
    return out;
}

inline std::map<std::string, int> grams(const Tokens& tokens, int n) {
    std::map<std::string, int> out;
    if (tokens.size() < static_cast<std::size_t>(n)) return out;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        out[join(tokens, i, n)] += 1;
    }
    return out;
}

inline double bleu(const Tokens& cand, const std::vector<Tokens>& refs, int max_n) {
    if (cand.empty()) return 0.0;
    double log_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        const auto cand_grams = grams(cand, n);
        long long total = 0;
        long long matched = 0;
        for (const auto& [gram, count] : cand_grams) {
            total += count;
            int best = 0;
            for (const Tokens& ref : refs) {
                const auto ref_grams = grams(ref, n);
                const auto it = ref_grams.find(gram);
                if (it != ref_grams.end() && it->second > best) best = it->second;
            }
            matched += std::min<long long>(count, best);
        }
        if (total == 0 || matched == 0) return 0.0;
        log_sum += std::log(static_cast<double>(matched) / total) / max_n;
    }
    std::size_t r = refs.front().size();
    for (const Tokens& ref : refs) {
        const auto diff = [&](std::size_t len) {
            return len > cand.size() ? len - cand.size() : cand.size() - len;
        };
        if (diff(ref.size()) < diff(r) || (diff(ref.size()) == diff(r) && ref.size() < r)) {
            r = ref.size();
        }
    }
    const double bp = cand.size() >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / cand.size());
    return bp * std::exp(log_sum);
}

inline bool is_subsequence(const Tokens& needle, const Tokens& haystack) {
    std::size_t i = 0;
    for (const std::string& token : haystack) {
        if (i < needle.size() && needle[i] == token) ++i;
    }
    return i == needle.size();
}

// True brute force: enumerate every subsequence of the candidate (callers
// keep candidates short) and find the longest that also appears in ref.
inline std::size_t lcs_bruteforce(const Tokens& cand, const Tokens& ref) {
    const std::size_t n = cand.size();
    std::size_t best = 0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        Tokens sub;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1ULL << i)) sub.push_back(cand[i]);
        }
        if (sub.size() > best && is_subsequence(sub, ref)) best = sub.size();
    }
    return best;
}

inline double rouge_l(const Tokens& cand, const std::vector<Tokens>& refs, double beta = 1.2) {
    if (cand.empty()) return 0.0;
    double best = 0.0;
    for (const Tokens& ref : refs) {
        if (ref.empty()) continue;
        const double lcs = static_cast<double>(lcs_bruteforce(cand, ref));
        if (lcs == 0.0) continue;
        const double r = lcs / ref.size();
        const double p = lcs / cand.size();
        const double f = (1.0 + beta * beta) * r * p / (r + beta * beta * p);
        if (f > best) best = f;
    }
    return best;
}

inline std::string stem(const std::string& w) {
    std::string s = w;
    const auto ends = [&s](const std::string& suf) {
        return s.size() > suf.size() && s.size() - suf.size() >= 2 &&
               s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
    };
    if (ends("ing")) s.resize(s.size() - 3);
    else if (ends("ed")) s.resize(s.size() - 2);
    else if (ends("es")) s.resize(s.size() - 2);
    else if (ends("s")) s.resize(s.size() - 1);
    if (s.size() >= 3 && s.back() == 'e') s.pop_back();
    return s;
}

inline double meteor_lite(const Tokens& cand, const std::vector<Tokens>& refs) {
    if (cand.empty()) return 0.0;
    double best = 0.0;
    for (const Tokens& ref : refs) {
        if (ref.empty()) continue;
        std::vector<int> cand_to_ref(cand.size(), -1);
        std::vector<bool> ref_used(ref.size(), false);
        for (int stage = 0; stage < 2; ++stage) {
            for (std::size_t i = 0; i < cand.size(); ++i) {
                if (cand_to_ref[i] >= 0) continue;
                for (std::size_t j = 0; j < ref.size(); ++j) {
                    if (ref_used[j]) continue;
                    const bool hit = stage == 0 ? cand[i] == ref[j]
                                                : stem(cand[i]) == stem(ref[j]);
                    if (hit) {
                        cand_to_ref[i] = static_cast<int>(j);
                        ref_used[j] = true;
                        break;
                    }
                }
            }
        }
        double m = 0.0;
        std::size_t chunks = 0;
        int prev_j = -2;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (cand_to_ref[i] < 0) {
                prev_j = -2;
                continue;
            }
            m += 1.0;
            if (cand_to_ref[i] != prev_j + 1) ++chunks;
            prev_j = cand_to_ref[i];
        }
        if (m == 0.0) continue;
        const double p = m / cand.size();
        const double r = m / ref.size();
        const double f = p * r / (0.9 * p + 0.1 * r);
        const double penalty = 0.5 * std::pow(chunks / m, 3.0);
        const double score = f * (1.0 - penalty);
        if (score > best) best = score;
    }
    return best;
}

inline std::vector<double> cider(
    const std::vector<std::pair<Tokens, std::vector<Tokens>>>& corpus, double sigma = 6.0,
    double epsilon = 1e-6) {
    const double n_docs = static_cast<double>(corpus.size());
    std::map<std::string, double> df;
    for (const auto& [cand, refs] : corpus) {
        std::set<std::string> seen;
        for (const Tokens& ref : refs) {
            for (int n = 1; n <= 4; ++n) {
                for (const auto& [g, c] : grams(ref, n)) seen.insert(g);
            }
        }
        for (const std::string& g : seen) df[g] += 1.0;
    }
    const auto idf = [&](const std::string& g) {
        double d = df.count(g) ? df.at(g) : 0.0;
        if (d < 1.0) d = 1.0;
        return std::log((n_docs + epsilon) / d);
    };

    std::vector<double> scores;
    for (const auto& [cand, refs] : corpus) {
        double total = 0.0;
        for (const Tokens& ref : refs) {
            const double delta = static_cast<double>(cand.size()) - static_cast<double>(ref.size());
            const double penalty = std::exp(-delta * delta / (2.0 * sigma * sigma));
            double avg = 0.0;
            for (int n = 1; n <= 4; ++n) {
                const auto cg = grams(cand, n);
                const auto rg = grams(ref, n);
                double dot = 0.0;
                double cnorm = 0.0;
                double rnorm = 0.0;
                for (const auto& [g, c] : cg) cnorm += (c * idf(g)) * (c * idf(g));
                for (const auto& [g, c] : rg) rnorm += (c * idf(g)) * (c * idf(g));
                for (const auto& [g, c] : cg) {
                    if (!rg.count(g)) continue;
                    const double cw = c * idf(g);
                    const double rw = rg.at(g) * idf(g);
                    dot += std::min(cw, rw) * rw;
                }
                if (cnorm > 0.0 && rnorm > 0.0) {
                    avg += penalty * dot / (std::sqrt(cnorm) * std::sqrt(rnorm));
                }
            }
            total += avg / 4.0;
        }
        scores.push_back(10.0 * total / static_cast<double>(refs.size()));
    }
    return scores;
}

}  // namespace oracles

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "alticon/error.hpp"
#include "alticon/metrics.hpp"
#include "alticon/util.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace alticon;
namespace m = alticon::metrics;

namespace {

// Hand-built corpus reused by the oracle-equivalence battery. Short,
// alt-text-flavored phrases with deliberate overlaps, repeats, and misses.
const std::vector<std::pair<std::string, std::vector<std::string>>> kCases = {
    {"delete", {"delete"}},
    {"go back", {"go back 15 seconds"}},
    {"volume", {"delete"}},
    {"go back 15 seconds", {"go back 15 seconds", "rewind 15 seconds"}},
    {"select angola", {"set your location to angola"}},
    {"hide profile", {"hide profile", "turn of camera"}},
    {"open the settings menu", {"open settings", "settings menu"}},
    {"play", {"play music", "start playback", "resume"}},
    {"start playback now", {"start playback", "play"}},
    {"go to step 3", {"go to step 3", "third bus stop", "view alternate route"}},
    {"deleting items", {"delete item"}},
    {"shows the map", {"show map"}},
    {"the the the", {"the cat"}},
    {"a b a b", {"a b", "b a"}},
    {"rewind fifteen seconds", {"go back 15 seconds"}},
    {"mute the volume", {"lower volume", "mute sound"}},
    {"select number 3", {"select line 3"}},
    {"zoom out", {"zoom out of the map view"}},
    {"take a photo with the camera", {"take photo"}},
    {"back", {"go back", "back", "navigate back"}},
    {"turn off notifications", {"disable notifications", "turn notifications off"}},
    {"search", {"find items", "search"}},
};

std::vector<std::pair<m::TokenSeq, std::vector<m::TokenSeq>>> tokenized_cases() {
    std::vector<std::pair<m::TokenSeq, std::vector<m::TokenSeq>>> out;
    for (const auto& [cand, refs] : kCases) {
        std::vector<m::TokenSeq> ref_tokens;
        for (const std::string& ref : refs) ref_tokens.push_back(m::tokenize(ref));
        out.emplace_back(m::tokenize(cand), std::move(ref_tokens));
    }
    return out;
}

}  // namespace

TEST_CASE("tokenize") {
    CHECK(m::tokenize("Go Back 15 seconds.") ==
          m::TokenSeq{"go", "back", "15", "seconds"});
    CHECK(m::tokenize("").empty());
    CHECK(m::tokenize("hide-profile") == m::TokenSeq{"hide-profile"});
    CHECK(m::tokenize("  (Play!)   'music' ") == m::TokenSeq{"play", "music"});
    CHECK(m::tokenize("...").empty());
}

TEST_CASE("bleu worked examples") {
    const auto t = [](const char* s) { return m::tokenize(s); };
    CHECK(m::bleu_n(t("delete"), {t("delete")}, 1) == doctest::Approx(1.0));
    // p1 = p2 = 1, BP = exp(1 - 4/2) = e^-1
    CHECK(m::bleu_n(t("go back"), {t("go back 15 seconds")}, 2) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(m::bleu_n(t("volume"), {t("delete")}, 1) == 0.0);
    CHECK(m::bleu_n({}, {t("delete")}, 1) == 0.0);
}

TEST_CASE("rouge_l worked examples") {
    const auto t = [](const char* s) { return m::tokenize(s); };
    CHECK(m::rouge_l(t("go back"), {t("go back")}) == doctest::Approx(1.0));
    // LCS=1, R=0.2, P=0.5, F(beta=1.2) = 2.44*0.1/(0.2+0.72)
    CHECK(m::rouge_l(t("select angola"), {t("set your location to angola")}) ==
          doctest::Approx(0.2652).epsilon(2e-4));
    CHECK(m::rouge_l(t("volume"), {t("delete")}) == 0.0);
}

TEST_CASE("meteor_lite worked examples") {
    const auto t = [](const char* s) { return m::tokenize(s); };
    // perfect one-word match still pays the one-chunk penalty: 1*(1-0.5)
    CHECK(m::meteor_lite(t("delete"), {t("delete")}) == doctest::Approx(0.5));
    CHECK(m::meteor_lite(t("volume"), {t("delete")}) == 0.0);
    // stem stage: deleting/delete both stem to "delet"
    CHECK(m::meteor_lite(t("deleting"), {t("delete")}) > 0.0);
    CHECK(m::light_stem("deleting") == "delet");
    CHECK(m::light_stem("delete") == "delet");
    CHECK(m::light_stem("goes") == "go");
    CHECK(m::light_stem("seconds") == "second");
}

TEST_CASE("meteor_lite synonym stage is pluggable") {
    testsupport::TempDir tmp("syn");
    write_file(tmp.path / "synonyms.txt", "delete remove erase\nphoto picture\n");
    const m::SynonymTable table = m::SynonymTable::load(tmp.path / "synonyms.txt");
    const auto t = [](const char* s) { return m::tokenize(s); };
    CHECK(m::meteor_lite(t("remove"), {t("delete")}, table) == doctest::Approx(0.5));
    CHECK(m::meteor_lite(t("remove"), {t("delete")}) == 0.0);  // empty default table
}

TEST_CASE("cider worked examples") {
    const auto t = [](const char* s) { return m::tokenize(s); };
    SUBCASE("singleton corpus, candidate equals its one reference, >= 4 tokens") {
        const auto scores =
            m::cider({{t("go back 15 seconds"), {t("go back 15 seconds")}}});
        REQUIRE(scores.size() == 1);
        CHECK(scores[0] == doctest::Approx(10.0).epsilon(1e-9));
    }
    SUBCASE("zero overlap scores zero") {
        const auto scores = m::cider({{t("volume up"), {t("delete item")}},
                                      {t("unrelated words"), {t("other caption")}}});
        CHECK(scores[0] == 0.0);
    }
    SUBCASE("three-item toy corpus matches the brute-force oracle to 1e-9") {
        const std::vector<std::pair<m::TokenSeq, std::vector<m::TokenSeq>>> corpus = {
            {t("play music"), {t("play music"), t("start playback")}},
            {t("pause music"), {t("pause")}},
            {t("open settings menu"), {t("open settings"), t("settings menu")}},
        };
        const auto ours = m::cider(corpus);
        const auto oracle = oracles::cider(corpus);
        REQUIRE(ours.size() == oracle.size());
        for (std::size_t i = 0; i < ours.size(); ++i) {
            CHECK(ours[i] == doctest::Approx(oracle[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("oracle equivalence battery on >= 20 hand-built cases") {
    const auto cases = tokenized_cases();
    REQUIRE(cases.size() >= 20);

    // CIDEr gets the whole battery as one corpus (document frequencies are
    // corpus-level); the others are per-case.
    const auto ours_cider = m::cider(cases);
    const auto oracle_cider = oracles::cider(cases);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& [cand, refs] = cases[i];
        CHECK(m::bleu_n(cand, refs, 1) == doctest::Approx(oracles::bleu(cand, refs, 1)).epsilon(1e-9));
        CHECK(m::bleu_n(cand, refs, 2) == doctest::Approx(oracles::bleu(cand, refs, 2)).epsilon(1e-9));
        CHECK(m::rouge_l(cand, refs) == doctest::Approx(oracles::rouge_l(cand, refs)).epsilon(1e-9));
        CHECK(m::meteor_lite(cand, refs) ==
              doctest::Approx(oracles::meteor_lite(cand, refs)).epsilon(1e-9));
        CHECK(ours_cider[i] == doctest::Approx(oracle_cider[i]).epsilon(1e-9));
    }
}

TEST_CASE("metric invariants (property)") {
    testsupport::TreeGen gen(31337);
    const auto random_tokens = [&gen](int max_len) {
        m::TokenSeq tokens;
        const int len = gen.pick(max_len + 1);
        for (int i = 0; i < len; ++i) tokens.push_back(gen.word());
        return tokens;
    };

    for (int iter = 0; iter < 200; ++iter) {
        const m::TokenSeq cand = random_tokens(6);
        std::vector<m::TokenSeq> refs;
        const int n_refs = 1 + gen.pick(3);
        for (int i = 0; i < n_refs; ++i) {
            m::TokenSeq r = random_tokens(5);
            if (r.empty()) r.push_back(gen.word());
            refs.push_back(std::move(r));
        }

        const double b1 = m::bleu_n(cand, refs, 1);
        const double b2 = m::bleu_n(cand, refs, 2);
        const double rl = m::rouge_l(cand, refs);
        const double ml = m::meteor_lite(cand, refs);
        for (const double v : {b1, b2, rl, ml}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }

        // reference-set permutation invariance
        std::vector<m::TokenSeq> shuffled = refs;
        std::rotate(shuffled.begin(), shuffled.begin() + gen.pick(static_cast<int>(refs.size())),
                    shuffled.end());
        CHECK(m::bleu_n(cand, shuffled, 2) == doctest::Approx(b2).epsilon(1e-12));
        CHECK(m::rouge_l(cand, shuffled) == doctest::Approx(rl).epsilon(1e-12));
        CHECK(m::meteor_lite(cand, shuffled) == doctest::Approx(ml).epsilon(1e-12));

        // BLEU-1 ignores candidate order
        m::TokenSeq reversed = cand;
        std::reverse(reversed.begin(), reversed.end());
        CHECK(m::bleu_n(reversed, refs, 1) == doctest::Approx(b1).epsilon(1e-12));
    }

    // identity scores 1.0 on BLEU and ROUGE; CIDEr per item stays in [0, 10]
    for (int iter = 0; iter < 50; ++iter) {
        m::TokenSeq tokens = random_tokens(5);
        if (tokens.empty()) tokens.push_back(gen.word());
        CHECK(m::bleu_n(tokens, {tokens}, 1) == doctest::Approx(1.0));
        CHECK(m::bleu_n(tokens, {tokens}, 2) ==
              doctest::Approx(tokens.size() >= 2 ? 1.0 : 0.0));
        CHECK(m::rouge_l(tokens, {tokens}) == doctest::Approx(1.0));
        const auto cider_scores = m::cider({{tokens, {tokens}}});
        CHECK(cider_scores[0] >= 0.0);
        CHECK(cider_scores[0] <= 10.0 + 1e-9);
    }

    // candidate order sensitivity: BLEU-2 can change under permutation
    const m::TokenSeq ref{"go", "back", "15", "seconds"};
    const m::TokenSeq inorder{"go", "back"};
    const m::TokenSeq swapped{"back", "go"};
    CHECK(m::bleu_n(inorder, {ref}, 1) == doctest::Approx(m::bleu_n(swapped, {ref}, 1)));
    CHECK(m::bleu_n(inorder, {ref}, 2) > m::bleu_n(swapped, {ref}, 2));
}

TEST_CASE("evaluate") {
    SUBCASE("empty record list errors") {
        CHECK_THROWS_AS(m::evaluate({}), Error);
    }
    SUBCASE("record without references errors") {
        CHECK_THROWS_AS(m::evaluate({{"i", "cand", {}}}), Error);
    }
    SUBCASE("all candidates equal to first refs make corpus BLEU-1 1.0") {
        std::vector<m::EvalRecord> records;
        records.push_back({"a", "play music", {"play music", "start"}});
        records.push_back({"b", "go back 15 seconds", {"go back 15 seconds"}});
        const m::MetricReport report = m::evaluate(records);
        CHECK(report.corpus_bleu1 == doctest::Approx(1.0));
        CHECK(report.items.size() == 2);
        CHECK(report.reference_count == 3);
    }
    SUBCASE("Fig-1 rewind fixture scores BLEU-1 1.0 on an exact ref match") {
        const m::MetricReport report = m::evaluate(
            {{"rewind", "go back 15 seconds", {"go back 15 seconds", "rewind 15 seconds"}}});
        CHECK(report.items[0].bleu1 == doctest::Approx(1.0));
        CHECK(report.items[0].rouge_l == doctest::Approx(1.0));
    }
    SUBCASE("report JSON round-trips") {
        const m::MetricReport report =
            m::evaluate({{"a", "play", {"play music"}}, {"b", "stop", {"stop"}}});
        const std::string dumped = report.to_json().dump(2);
        const ordered_json parsed = ordered_json::parse(dumped);
        CHECK(parsed.dump(2) == dumped);
        CHECK(parsed["config"]["tokenizer"] == std::string(m::kTokenizerVersion));
        CHECK(parsed["corpus"]["spice"] == "n/a");
    }
    SUBCASE("corpus means match per-item means for ROUGE/METEOR/CIDEr") {
        std::vector<m::EvalRecord> records;
        records.push_back({"a", "play music", {"play music"}});
        records.push_back({"b", "volume", {"mute sound"}});
        records.push_back({"c", "hide profile", {"hide profile", "turn of camera"}});
        const m::MetricReport report = m::evaluate(records);
        double rouge_mean = 0.0;
        double cider_mean = 0.0;
        for (const auto& item : report.items) {
            rouge_mean += item.rouge_l;
            cider_mean += item.cider;
        }
        CHECK(report.corpus_rouge_l == doctest::Approx(rouge_mean / 3.0));
        CHECK(report.corpus_cider == doctest::Approx(cider_mean / 3.0));
    }
}

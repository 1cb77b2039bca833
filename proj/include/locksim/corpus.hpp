#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace locksim::corpus {

// Maximal runs of invalid UTF-8 bytes collapse to this sentinel token
// (U+FFFD), which is counted like any other token.
inline constexpr std::string_view kInvalidToken = "\xEF\xBF\xBD";

// Splits on whitespace and punctuation, lowercasing ASCII letters. ASCII
// alphanumerics are word characters; every other ASCII byte separates.
// Non-ASCII codepoints are word characters except a fixed set of Unicode
// space/punctuation codepoints (see is_separator_codepoint). Deterministic;
// order-preserving.
std::vector<std::string> tokenize(std::string_view text);

bool is_separator_codepoint(std::uint32_t cp);

// The spelling variants competing for one word, e.g. {colour, color}.
// `incumbent` wins exact ties; `canonical` names the set.
struct VariantSet {
    std::string canonical;
    std::vector<std::string> variants;
    std::string incumbent;

    void validate() const; // throws std::invalid_argument
};

struct Document {
    std::vector<std::string> tokens;
    double timestamp = 0; // seconds since epoch, UTC
    std::uint64_t retweets = 0;
    std::uint64_t hearts = 0;
};

struct CountOptions {
    bool weighted = false;
    // With the floor on, a zero-engagement document still contributes
    // weight 1 instead of ln(1) = 0.
    bool weight_floor = true;
};

// Per-variant totals. Weighted documents contribute
// ln(1 + retweets + hearts) per occurrence.
std::map<std::string, double> count_variants(std::span<const Document> docs, const VariantSet& vs,
                                             const CountOptions& opts = {});

// Variant counts over documents with timestamp in [window_start, window_end).
struct CorpusWindow {
    double window_start = 0;
    double window_end = 0;
    std::map<std::string, double> counts;
};

CorpusWindow make_window(std::span<const Document> docs, const VariantSet& vs, double window_start,
                         double window_end, const CountOptions& opts = {});

// The variant with the strictly greatest count; any exact tie for the top
// goes to the incumbent (a 50/50 split must not flip the convention).
std::string majority_spelling(const CorpusWindow& window, const VariantSet& vs);

// Rewrites a token to the window majority if it belongs to the variant set,
// otherwise passes it through.
std::string autocorrect(const std::string& token, const VariantSet& vs, const CorpusWindow& window);

// Orthography preferences. Only the sign and ordering of scores are
// contractual; the magnitudes are configuration.
struct StyleRules {
    double u_philic_bonus = 1.0;   // "our" spellings
    double zed_penalty = -1.0;     // any 'z'
    double ell_bonus = 1.0;        // doubled ells
    double pluralia_bonus = 1.0;   // singular pluralia tantum
    double tilde_allowance = 1.0;  // U+00E3
    // Words that look u-philic but are not.
    std::set<std::string> u_philic_deny = {"doour", "wourk", "terrour"};
    std::set<std::string> pluralia_singulars = {"trouser", "pant", "scissor", "thank"};
};

double style_score(const std::string& word, const StyleRules& rules);

// Newline-delimited JSON records:
// {"text":..., "timestamp":"ISO-8601", "retweets":n, "hearts":n}
std::vector<Document> load_ndjson(const std::string& path);

VariantSet load_variant_set(const std::string& path);
StyleRules load_style_rules(const std::string& path);

} // namespace locksim::corpus

#include "locksim/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "locksim/timeutil.hpp"

namespace locksim::corpus {

bool is_separator_codepoint(std::uint32_t cp) {
    if (cp < 0x80) return !(cp >= 'a' && cp <= 'z') && !(cp >= '0' && cp <= '9');
    switch (cp) {
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:                       // spaces
        case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7:
        case 0xBB: case 0xBF: case 0x3001: case 0x3002:              // punctuation
            return true;
        default:
            return (cp >= 0x2000 && cp <= 0x200A) || (cp >= 0x2010 && cp <= 0x2027) ||
                   (cp >= 0x2030 && cp <= 0x205E);
    }
}

namespace {

// Decodes one UTF-8 codepoint at `i`, advancing it. Returns false on an
// invalid sequence (overlong, surrogate, out of range, truncated), in which
// case `i` advances by exactly one byte.
bool decode_utf8(std::string_view s, std::size_t& i, std::uint32_t& cp) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        cp = b0;
        ++i;
        return true;
    }
    int len = 0;
    std::uint32_t acc = 0;
    if ((b0 & 0xE0) == 0xC0) { len = 2; acc = b0 & 0x1Fu; }
    else if ((b0 & 0xF0) == 0xE0) { len = 3; acc = b0 & 0x0Fu; }
    else if ((b0 & 0xF8) == 0xF0) { len = 4; acc = b0 & 0x07u; }
    else { ++i; return false; }
    if (i + len > s.size()) { ++i; return false; }
    for (int k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) { ++i; return false; }
        acc = (acc << 6) | (b & 0x3Fu);
    }
    static constexpr std::uint32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (acc < kMin[len] || acc > 0x10FFFF || (acc >= 0xD800 && acc <= 0xDFFF)) {
        ++i;
        return false;
    }
    cp = acc;
    i += len;
    return true;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

} // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    bool in_invalid_run = false;

    const auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };

    std::size_t i = 0;
    while (i < text.size()) {
        std::uint32_t cp = 0;
        if (!decode_utf8(text, i, cp)) {
            flush();
            if (!in_invalid_run) tokens.emplace_back(kInvalidToken);
            in_invalid_run = true;
            continue;
        }
        in_invalid_run = false;
        if (cp >= 'A' && cp <= 'Z') cp += 'a' - 'A';
        if (is_separator_codepoint(cp)) {
            flush();
        } else {
            append_utf8(current, cp);
        }
    }
    flush();
    return tokens;
}

void VariantSet::validate() const {
    if (variants.empty()) throw std::invalid_argument("variant set is empty");
    const auto has = [&](const std::string& w) {
        return std::find(variants.begin(), variants.end(), w) != variants.end();
    };
    if (!has(canonical)) throw std::invalid_argument("canonical '" + canonical + "' not in variants");
    if (!has(incumbent)) throw std::invalid_argument("incumbent '" + incumbent + "' not in variants");
    for (const auto& v : variants) {
        const auto toks = tokenize(v);
        if (toks.size() != 1 || toks[0] != v)
            throw std::invalid_argument("variant '" + v + "' is not a single case-normalized token");
    }
}

namespace {

double document_weight(const Document& doc, const CountOptions& opts) {
    if (!opts.weighted) return 1.0;
    const double w = std::log1p(static_cast<double>(doc.retweets + doc.hearts));
    return opts.weight_floor ? std::max(w, 1.0) : w;
}

} // namespace

std::map<std::string, double> count_variants(std::span<const Document> docs, const VariantSet& vs,
                                             const CountOptions& opts) {
    vs.validate();
    std::map<std::string, double> counts;
    for (const auto& v : vs.variants) counts[v] = 0.0;
    for (const auto& doc : docs) {
        const double w = document_weight(doc, opts);
        for (const auto& tok : doc.tokens) {
            const auto it = counts.find(tok);
            if (it != counts.end()) it->second += w;
        }
    }
    return counts;
}

CorpusWindow make_window(std::span<const Document> docs, const VariantSet& vs, double window_start,
                         double window_end, const CountOptions& opts) {
    if (!(window_start < window_end)) throw std::invalid_argument("window_start must precede window_end");
    std::vector<Document> inside;
    for (const auto& doc : docs)
        if (doc.timestamp >= window_start && doc.timestamp < window_end) inside.push_back(doc);
    CorpusWindow w;
    w.window_start = window_start;
    w.window_end = window_end;
    w.counts = count_variants(inside, vs, opts);
    return w;
}

std::string majority_spelling(const CorpusWindow& window, const VariantSet& vs) {
    vs.validate();
    const auto count_of = [&](const std::string& v) {
        const auto it = window.counts.find(v);
        return it == window.counts.end() ? 0.0 : it->second;
    };
    std::string best;
    double best_count = -1.0;
    bool tied = false;
    for (const auto& v : vs.variants) {
        const double c = count_of(v);
        if (c > best_count) {
            best = v;
            best_count = c;
            tied = false;
        } else if (c == best_count) {
            tied = true;
        }
    }
    return tied ? vs.incumbent : best;
}

std::string autocorrect(const std::string& token, const VariantSet& vs, const CorpusWindow& window) {
    if (std::find(vs.variants.begin(), vs.variants.end(), token) == vs.variants.end()) return token;
    return majority_spelling(window, vs);
}

double style_score(const std::string& word, const StyleRules& rules) {
    if (word.empty()) throw std::invalid_argument("style_score needs a nonempty word");
    double score = 0.0;
    if (word.find("our") != std::string::npos && !rules.u_philic_deny.count(word))
        score += rules.u_philic_bonus;
    if (word.find('z') != std::string::npos) score += rules.zed_penalty;
    if (word.find("ll") != std::string::npos) score += rules.ell_bonus;
    if (rules.pluralia_singulars.count(word)) score += rules.pluralia_bonus;
    if (word.find("\xC3\xA3") != std::string::npos) score += rules.tilde_allowance;
    return score;
}

std::vector<Document> load_ndjson(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open document file: " + path);
    std::vector<Document> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        Document doc;
        doc.tokens = tokenize(j.at("text").get<std::string>());
        doc.timestamp = timeutil::parse_iso8601(j.at("timestamp").get<std::string>());
        doc.retweets = j.value("retweets", 0ULL);
        doc.hearts = j.value("hearts", 0ULL);
        docs.push_back(std::move(doc));
    }
    return docs;
}

VariantSet load_variant_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open variant set file: " + path);
    const auto j = nlohmann::json::parse(in);
    VariantSet vs;
    vs.canonical = j.at("canonical").get<std::string>();
    vs.variants = j.at("variants").get<std::vector<std::string>>();
    vs.incumbent = j.at("incumbent").get<std::string>();
    vs.validate();
    return vs;
}

StyleRules load_style_rules(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open style rules file: " + path);
    const auto j = nlohmann::json::parse(in);
    StyleRules r;
    r.u_philic_bonus = j.value("u_philic_bonus", r.u_philic_bonus);
    r.zed_penalty = j.value("zed_penalty", r.zed_penalty);
    r.ell_bonus = j.value("ell_bonus", r.ell_bonus);
    r.pluralia_bonus = j.value("pluralia_bonus", r.pluralia_bonus);
    r.tilde_allowance = j.value("tilde_allowance", r.tilde_allowance);
    if (j.contains("u_philic_deny"))
        r.u_philic_deny = j.at("u_philic_deny").get<std::set<std::string>>();
    if (j.contains("pluralia_singulars"))
        r.pluralia_singulars = j.at("pluralia_singulars").get<std::set<std::string>>();
    return r;
}

} // namespace locksim::corpus

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "cel/baselines.hpp"
#include "cel/errors.hpp"
#include "cel/evaluation.hpp"
#include "cel/features.hpp"

namespace cel {

// Shortest round-trip decimal representation (up to 17 significant digits).
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline double parse_double(const std::string& s, const std::string& context) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InputError(context + ": bad number '" + s + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Atomic write: temp file in the same directory, then rename.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw StateError("cannot write file: " + tmp);
        out << content;
        if (!out)
            throw StateError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw StateError("cannot rename " + tmp + " to " + path);
}

inline std::vector<std::string> to_lines(const std::string& content) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i < content.size(); ++i) {
        if (content[i] == '\n') {
            std::size_t end = i;
            if (end > start && content[end - 1] == '\r') --end;
            lines.push_back(content.substr(start, end - start));
            start = i + 1;
        }
    }
    if (start < content.size()) lines.push_back(content.substr(start));
    return lines;
}

// ---- item feature files -------------------------------------------------
// First line: `#dim <dimensionality>`; then one item per line,
// `<item_id> <index>:<value> ...` with ascending indices.

inline std::string serialize_catalog(const ItemCatalog& catalog) {
    std::string out = "#dim " + std::to_string(catalog.dim) + "\n";
    for (const auto& [id, v] : catalog.items) {
        out += id;
        for (const auto& [idx, val] : v.entries) {
            out += ' ';
            out += std::to_string(idx);
            out += ':';
            out += format_double(val);
        }
        out += '\n';
    }
    return out;
}

inline ItemCatalog parse_catalog(const std::string& content) {
    const auto lines = to_lines(content);
    if (lines.empty() || lines[0].rfind("#dim ", 0) != 0)
        throw InputError("feature file: missing '#dim <n>' header on line 1");
    ItemCatalog catalog;
    {
        const std::string d = lines[0].substr(5);
        unsigned long dim = 0;
        auto [ptr, ec] = std::from_chars(d.data(), d.data() + d.size(), dim);
        if (ec != std::errc() || ptr != d.data() + d.size() || dim == 0)
            throw InputError("feature file: bad dimensionality '" + d + "'");
        catalog.dim = static_cast<std::uint32_t>(dim);
    }
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const std::string where = "feature file line " + std::to_string(ln + 1);
        const auto fields = split(lines[ln], ' ');
        FeatureVector v;
        v.dim = catalog.dim;
        for (std::size_t f = 1; f < fields.size(); ++f) {
            if (fields[f].empty()) continue;
            const auto colon = fields[f].find(':');
            if (colon == std::string::npos)
                throw InputError(where + ": expected index:value, got '" + fields[f] + "'");
            unsigned long idx = 0;
            const std::string idx_s = fields[f].substr(0, colon);
            auto [ptr, ec] = std::from_chars(idx_s.data(), idx_s.data() + idx_s.size(), idx);
            if (ec != std::errc() || ptr != idx_s.data() + idx_s.size())
                throw InputError(where + ": bad index '" + idx_s + "'");
            v.entries.emplace_back(static_cast<std::uint32_t>(idx),
                                   parse_double(fields[f].substr(colon + 1), where));
        }
        try {
            catalog.insert(fields[0], std::move(v));
        } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
        }
    }
    if (catalog.items.empty())
        throw InputError("feature file: no items");
    return catalog;
}

// ---- corpus files -------------------------------------------------------
// `<doc_id>\t<comma separated categories>\t<raw text>`

struct CorpusDoc {
    std::string doc_id;
    std::vector<std::string> categories;
    std::string text;
};

inline std::vector<CorpusDoc> parse_corpus(const std::string& content) {
    std::vector<CorpusDoc> docs;
    const auto lines = to_lines(content);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const auto fields = split(lines[ln], '\t');
        if (fields.size() != 3)
            throw InputError("corpus line " + std::to_string(ln + 1) +
                             ": expected 3 tab-separated fields, got " +
                             std::to_string(fields.size()));
        CorpusDoc doc;
        doc.doc_id = fields[0];
        for (const auto& c : split(fields[1], ','))
            if (!c.empty()) doc.categories.push_back(c);
        doc.text = fields[2];
        docs.push_back(std::move(doc));
    }
    if (docs.empty())
        throw InputError("corpus: no documents");
    return docs;
}

// ---- ratings files ------------------------------------------------------
// `<user_id>\t<item_id>\t<+1|-1>`

inline std::vector<UserRatings> parse_ratings(const std::string& content) {
    std::map<std::string, UserRatings> by_user;
    std::vector<std::string> order;
    const auto lines = to_lines(content);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const std::string where = "ratings line " + std::to_string(ln + 1);
        const auto fields = split(lines[ln], '\t');
        if (fields.size() != 3)
            throw InputError(where + ": expected user<TAB>item<TAB>rating");
        int y;
        if (fields[2] == "+1" || fields[2] == "1") y = +1;
        else if (fields[2] == "-1") y = -1;
        else throw InputError(where + ": rating must be +1 or -1, got '" + fields[2] + "'");
        auto it = by_user.find(fields[0]);
        if (it == by_user.end()) {
            order.push_back(fields[0]);
            it = by_user.emplace(fields[0], UserRatings{fields[0], {}}).first;
        }
        if (!it->second.ratings.emplace(fields[1], y).second)
            throw InputError(where + ": duplicate rating for user " + fields[0] +
                             " item " + fields[1]);
    }
    std::vector<UserRatings> users;
    users.reserve(order.size());
    for (const auto& id : order) users.push_back(std::move(by_user.at(id)));
    if (users.empty())
        throw InputError("ratings: no entries");
    return users;
}

inline std::string serialize_ratings(const std::vector<UserRatings>& users) {
    std::string out;
    for (const auto& u : users)
        for (const auto& [item, y] : u.ratings)
            out += u.user_id + "\t" + item + "\t" + (y > 0 ? "+1" : "-1") + "\n";
    return out;
}

// ---- learning-curve reports ----------------------------------------------
// Metadata block as `# key<TAB>value` comment lines, then a header row and
// one TSV row per budget. Budgets with no evaluated cells print "nan".

inline std::string serialize_report(const LearningCurveReport& report,
                                    const std::vector<std::pair<std::string, std::string>>& meta) {
    std::string out;
    for (const auto& [k, v] : meta)
        out += "# " + k + "\t" + v + "\n";
    out += "budget\tmean_precision\tstd_err\tn_evaluated\tn_skipped\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.budget);
        out += '\t';
        out += row.n_evaluated > 0 ? format_double(row.mean_precision) : "nan";
        out += '\t';
        out += row.n_evaluated > 0 ? format_double(row.std_err) : "nan";
        out += '\t';
        out += std::to_string(row.n_evaluated);
        out += '\t';
        out += std::to_string(row.n_skipped);
        out += '\n';
    }
    return out;
}

} // namespace cel

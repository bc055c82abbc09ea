#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cel/ensemble.hpp"
#include "cel/io.hpp"
#include "cel/rng.hpp"

namespace cel {

// Line-oriented ensemble store. Layout:
//   CEL v1
//   checksum <fnv1a64 of everything below, hex>
//   dim <feature dimensionality>
//   kernel linear | kernel rbf <gamma>
//   params <C> <kkt_tolerance> <max_passes>
//   catalog <catalog id or ->
//   members <L>, then per member: member/trained_on/slope/bias/svmC/
//   converged/support and one `sv` line per support item
//   pending <count> and one `pend <user id>` line each
//   end
// Floats are shortest round-trip decimals, so loading reproduces decision
// values exactly.
inline constexpr const char* kStoreMagic = "CEL v1";

inline std::string serialize_ensemble(const EnsembleModel& ensemble, std::uint32_t dim) {
    std::string body;
    body += "dim " + std::to_string(dim) + "\n";
    if (ensemble.kernel.kind == KernelConfig::Kind::rbf)
        body += "kernel rbf " + format_double(ensemble.kernel.gamma) + "\n";
    else
        body += "kernel linear\n";
    body += "params " + format_double(ensemble.params.C) + " " +
            format_double(ensemble.params.kkt_tolerance) + " " +
            std::to_string(ensemble.params.max_passes) + "\n";
    body += "catalog " + (ensemble.catalog_id.empty() ? "-" : ensemble.catalog_id) + "\n";
    body += "members " + std::to_string(ensemble.members.size()) + "\n";
    for (const auto& m : ensemble.members) {
        body += "member " + m.user_id + "\n";
        body += "trained_on " + std::to_string(m.trained_on) + "\n";
        body += "slope " + format_double(m.slope) + "\n";
        body += "bias " + format_double(m.svm.bias) + "\n";
        body += "svmC " + format_double(m.svm.C) + "\n";
        body += std::string("converged ") + (m.svm.converged ? "1" : "0") + "\n";
        body += "support " + std::to_string(m.svm.support.size()) + "\n";
        for (const auto& sv : m.svm.support) {
            body += "sv " + sv.item_id + " " + (sv.y > 0 ? "+1" : "-1") + " " +
                    format_double(sv.alpha);
            for (const auto& [idx, val] : sv.x.entries)
                body += " " + std::to_string(idx) + ":" + format_double(val);
            body += "\n";
        }
    }
    body += "pending " + std::to_string(ensemble.pending.size()) + "\n";
    for (const auto& p : ensemble.pending)
        body += "pend " + p + "\n";
    body += "end\n";

    char checksum[17];
    std::snprintf(checksum, sizeof(checksum), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(body)));
    return std::string(kStoreMagic) + "\nchecksum " + checksum + "\n" + body;
}

namespace detail {

class LineReader {
public:
    explicit LineReader(std::vector<std::string> lines) : lines_(std::move(lines)) {}

    const std::string& next(const std::string& expect_prefix) {
        if (pos_ >= lines_.size())
            throw InputError("store: unexpected end of file, expected '" + expect_prefix + "'");
        const std::string& line = lines_[pos_++];
        if (line.compare(0, expect_prefix.size(), expect_prefix) != 0)
            throw InputError("store line " + std::to_string(pos_) + ": expected '" +
                             expect_prefix + "', got '" + line + "'");
        return line;
    }

private:
    std::vector<std::string> lines_;
    std::size_t pos_ = 0;
};

inline FeatureVector parse_sv_entries(const std::vector<std::string>& fields,
                                      std::size_t first, std::uint32_t dim,
                                      const std::string& where) {
    FeatureVector v;
    v.dim = dim;
    for (std::size_t f = first; f < fields.size(); ++f) {
        const auto colon = fields[f].find(':');
        if (colon == std::string::npos)
            throw InputError(where + ": expected index:value");
        unsigned long idx = 0;
        const std::string idx_s = fields[f].substr(0, colon);
        auto [ptr, ec] = std::from_chars(idx_s.data(), idx_s.data() + idx_s.size(), idx);
        if (ec != std::errc() || ptr != idx_s.data() + idx_s.size())
            throw InputError(where + ": bad index '" + idx_s + "'");
        v.entries.emplace_back(static_cast<std::uint32_t>(idx),
                               parse_double(fields[f].substr(colon + 1), where));
    }
    v.validate();
    return v;
}

} // namespace detail

struct LoadedEnsemble {
    EnsembleModel ensemble;
    std::uint32_t dim = 0;
};

inline LoadedEnsemble parse_ensemble(const std::string& content) {
    auto lines = to_lines(content);
    if (lines.empty() || lines[0] != kStoreMagic)
        throw InputError(std::string("store: version mismatch, expected '") + kStoreMagic +
                         "', got '" + (lines.empty() ? "" : lines[0]) + "'");
    if (lines.size() < 2 || lines[1].rfind("checksum ", 0) != 0)
        throw InputError("store: missing checksum line");
    const std::string stored_sum = lines[1].substr(9);
    std::string body;
    for (std::size_t i = 2; i < lines.size(); ++i)
        body += lines[i] + "\n";
    char actual[17];
    std::snprintf(actual, sizeof(actual), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(body)));
    if (stored_sum != actual)
        throw InputError("store: checksum mismatch (file corrupted?)");

    detail::LineReader reader(std::vector<std::string>(lines.begin() + 2, lines.end()));
    LoadedEnsemble out;

    {
        const auto f = split(reader.next("dim "), ' ');
        out.dim = static_cast<std::uint32_t>(std::stoul(f[1]));
    }
    {
        const auto f = split(reader.next("kernel "), ' ');
        if (f[1] == "linear") out.ensemble.kernel = KernelConfig::linear();
        else if (f[1] == "rbf" && f.size() == 3)
            out.ensemble.kernel = KernelConfig::rbf(parse_double(f[2], "store kernel"));
        else throw InputError("store: bad kernel line");
    }
    {
        const auto f = split(reader.next("params "), ' ');
        if (f.size() != 4) throw InputError("store: bad params line");
        out.ensemble.params.C = parse_double(f[1], "store params");
        out.ensemble.params.kkt_tolerance = parse_double(f[2], "store params");
        out.ensemble.params.max_passes = std::stoul(f[3]);
    }
    {
        const auto f = split(reader.next("catalog "), ' ');
        out.ensemble.catalog_id = f[1] == "-" ? "" : f[1];
    }
    const std::size_t n_members = std::stoul(split(reader.next("members "), ' ')[1]);
    for (std::size_t i = 0; i < n_members; ++i) {
        PreferenceModel m;
        m.user_id = split(reader.next("member "), ' ')[1];
        m.trained_on = std::stoul(split(reader.next("trained_on "), ' ')[1]);
        m.slope = parse_double(split(reader.next("slope "), ' ')[1], "store slope");
        m.svm.bias = parse_double(split(reader.next("bias "), ' ')[1], "store bias");
        m.svm.C = parse_double(split(reader.next("svmC "), ' ')[1], "store svmC");
        m.svm.converged = split(reader.next("converged "), ' ')[1] == "1";
        m.svm.kernel = out.ensemble.kernel;
        const std::size_t n_sv = std::stoul(split(reader.next("support "), ' ')[1]);
        for (std::size_t s = 0; s < n_sv; ++s) {
            const auto f = split(reader.next("sv "), ' ');
            if (f.size() < 4) throw InputError("store: bad sv line");
            SvmModel::SupportItem sv;
            sv.item_id = f[1];
            if (f[2] == "+1") sv.y = +1;
            else if (f[2] == "-1") sv.y = -1;
            else throw InputError("store: bad sv label '" + f[2] + "'");
            sv.alpha = parse_double(f[3], "store sv alpha");
            sv.x = detail::parse_sv_entries(f, 4, out.dim, "store sv");
            m.svm.support.push_back(std::move(sv));
        }
        out.ensemble.members.push_back(std::move(m));
    }
    const std::size_t n_pending = std::stoul(split(reader.next("pending "), ' ')[1]);
    for (std::size_t i = 0; i < n_pending; ++i)
        out.ensemble.pending.push_back(split(reader.next("pend "), ' ')[1]);
    reader.next("end");
    return out;
}

inline void save_ensemble(const std::string& path, const EnsembleModel& ensemble,
                          std::uint32_t dim) {
    write_file_atomic(path, serialize_ensemble(ensemble, dim));
}

inline LoadedEnsemble load_ensemble(const std::string& path) {
    return parse_ensemble(read_file(path));
}

} // namespace cel

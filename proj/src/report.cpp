#include "spiderpcg/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace spiderpcg {

namespace {

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string optional_fixed(const std::optional<double>& v, int digits)
{
    return v ? fixed(*v, digits) : std::string();
}

std::string p_text(const std::optional<double>& p)
{
    if (!p) {
        return "";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", *p);
    return buf;
}

std::string capitalized(std::string_view s)
{
    std::string out(s);
    if (!out.empty()) {
        out[0] = static_cast<char>(out[0] - 'a' + 'A');
    }
    return out;
}

using CellKey = std::pair<InitialKind, StressCategory>;

const ComparisonResult* find_comparison(std::span<const ComparisonResult> comparisons, const CellKey& key)
{
    for (const ComparisonResult& c : comparisons) {
        if (c.initial_kind == key.first && c.stress_category == key.second) {
            return &c;
        }
    }
    return nullptr;
}

std::optional<double> p_of(const ComparisonResult* cmp, Method m)
{
    if (!cmp) {
        return std::nullopt;
    }
    const auto it = cmp->p_values.find(m);
    return it == cmp->p_values.end() ? std::nullopt : it->second;
}

std::string escaped_marker(Marker m)
{
    std::string out;
    for (char c : marker_text(m)) {
        out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string summary_csv(std::span<const CellSummary> summaries, std::span<const ComparisonResult> comparisons)
{
    std::ostringstream os;
    os << "initial_kind,stress_category,method,n_runs,n_success,accuracy_percent,mean_presented,std_presented,"
          "considered,best,marker\n";
    for (const CellSummary& s : summaries) {
        const ComparisonResult* cmp = find_comparison(comparisons, {s.initial_kind, s.stress_category});
        const bool best = cmp && cmp->best == s.method;
        os << initial_kind_name(s.initial_kind) << ',' << category_name(s.stress_category) << ','
           << method_name(s.method) << ',' << s.n_runs << ',' << s.n_success << ',' << fixed(s.accuracy_percent, 2)
           << ',' << optional_fixed(s.mean_presented, 6) << ',' << optional_fixed(s.std_presented, 6) << ','
           << (s.considered ? 1 : 0) << ',' << (best ? 1 : 0) << ','
           << (cmp ? marker_text(cmp->marker(s.method)) : "") << '\n';
    }
    return os.str();
}

std::string summary_markdown(std::span<const CellSummary> summaries, std::span<const ComparisonResult> comparisons)
{
    std::set<Method> method_set;
    std::map<CellKey, std::map<Method, CellSummary>> rows;
    for (const CellSummary& s : summaries) {
        method_set.insert(s.method);
        rows[{s.initial_kind, s.stress_category}][s.method] = s;
    }
    const std::vector<Method> methods(method_set.begin(), method_set.end());

    std::ostringstream os;
    os << "| Initial | Stress |";
    for (Method m : methods) {
        os << ' ' << method_label(m) << " |";
    }
    os << "\n|---|---|";
    for (std::size_t i = 0; i < methods.size(); ++i) {
        os << "---|";
    }
    os << '\n';

    for (const auto& [key, cells] : rows) {
        const ComparisonResult* cmp = find_comparison(comparisons, key);
        os << "| " << capitalized(initial_kind_name(key.first)) << " | " << capitalized(category_name(key.second))
           << " |";
        for (Method m : methods) {
            const auto it = cells.find(m);
            if (it == cells.end()) {
                os << " |";
                continue;
            }
            const CellSummary& s = it->second;
            std::string value = "n/a";
            if (s.mean_presented) {
                value = fixed(*s.mean_presented, 2) + " ± " + (s.std_presented ? fixed(*s.std_presented, 2) : "n/a");
            }
            if (cmp && cmp->best == m) {
                value = "**" + value + "**";
            }
            if (cmp) {
                value += escaped_marker(cmp->marker(m));
            }
            value += " (" + fixed(s.accuracy_percent, 2) + "%";
            if (!s.considered) {
                value += ", below 75%";
            }
            value += ")";
            os << ' ' << value << " |";
        }
        os << '\n';
    }
    return os.str();
}

std::string comparison_csv(std::span<const CellSummary> summaries, std::span<const ComparisonResult> comparisons)
{
    std::ostringstream os;
    os << "initial_kind,stress_category,method,mean_presented,accuracy_percent,considered,best,p_vs_best,marker\n";
    for (const CellSummary& s : summaries) {
        const ComparisonResult* cmp = find_comparison(comparisons, {s.initial_kind, s.stress_category});
        os << initial_kind_name(s.initial_kind) << ',' << category_name(s.stress_category) << ','
           << method_name(s.method) << ',' << optional_fixed(s.mean_presented, 6) << ','
           << fixed(s.accuracy_percent, 2) << ',' << (s.considered ? 1 : 0) << ','
           << (cmp && cmp->best == s.method ? 1 : 0) << ',' << p_text(p_of(cmp, s.method)) << ','
           << (cmp ? marker_text(cmp->marker(s.method)) : "") << '\n';
    }
    return os.str();
}

std::string comparison_markdown(std::span<const CellSummary> summaries,
                                std::span<const ComparisonResult> comparisons)
{
    std::ostringstream os;
    os << "| Initial | Stress | Best | Method | Mean | p vs best | Marker |\n|---|---|---|---|---|---|---|\n";
    for (const CellSummary& s : summaries) {
        const ComparisonResult* cmp = find_comparison(comparisons, {s.initial_kind, s.stress_category});
        const std::string best = cmp && cmp->best ? std::string(method_label(*cmp->best)) : "none";
        os << "| " << capitalized(initial_kind_name(s.initial_kind)) << " | "
           << capitalized(category_name(s.stress_category)) << " | " << best << " | " << method_label(s.method)
           << " | " << (s.mean_presented ? fixed(*s.mean_presented, 2) : "n/a") << " | "
           << (cmp && cmp->best == s.method ? "-" : p_text(p_of(cmp, s.method))) << " | "
           << (cmp ? escaped_marker(cmp->marker(s.method)) : "") << " |\n";
    }
    return os.str();
}

} // namespace spiderpcg

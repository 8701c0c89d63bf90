#include "riskflow/rating.hpp"

#include <algorithm>

#include "riskflow/error.hpp"

namespace riskflow {

RatingMatrix::RatingMatrix(std::string name, std::uint32_t version,
                           std::vector<Likelihood> likelihood_axis,
                           std::vector<Severity> severity_axis, Grid cells)
    : name_(std::move(name)),
      version_(version),
      likelihood_axis_(std::move(likelihood_axis)),
      severity_axis_(std::move(severity_axis)),
      cells_(std::move(cells)) {}

std::optional<std::size_t> RatingMatrix::position(Likelihood l) const {
    auto it = std::find(likelihood_axis_.begin(), likelihood_axis_.end(), l);
    if (it == likelihood_axis_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - likelihood_axis_.begin());
}

std::optional<std::size_t> RatingMatrix::position(Severity s) const {
    auto it = std::find(severity_axis_.begin(), severity_axis_.end(), s);
    if (it == severity_axis_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - severity_axis_.begin());
}

std::optional<Rating> RatingMatrix::cell(Likelihood l, Severity s) const {
    const auto li = position(l);
    const auto si = position(s);
    if (!li || !si || *li >= cells_.size() || *si >= cells_[*li].size()) return std::nullopt;
    return cells_[*li][*si];
}

RatingMatrix RatingMatrix::with_cell(Likelihood l, Severity s,
                                     std::optional<Rating> value) const {
    RatingMatrix copy = *this;
    const auto li = position(l);
    const auto si = position(s);
    if (!li || !si) {
        throw Error("LevelNotOnAxis", "cell (" + std::string(to_code(l)) + "," +
                                          std::string(to_code(s)) + ") is not on the matrix axes");
    }
    if (copy.cells_.size() <= *li) copy.cells_.resize(*li + 1);
    if (copy.cells_[*li].size() <= *si) copy.cells_[*li].resize(*si + 1);
    copy.cells_[*li][*si] = value;
    return copy;
}

RatingMatrix RatingMatrix::with_identity(std::string name, std::uint32_t version) const {
    RatingMatrix copy = *this;
    copy.name_ = std::move(name);
    copy.version_ = version;
    return copy;
}

RatingMatrix default_matrix() {
    constexpr auto L = Rating::Low;
    constexpr auto M = Rating::Moderate;
    constexpr auto H = Rating::High;
    constexpr auto C = Rating::Critical;
    // Rows N, L, M, H, VH; columns severity L, M, H, C.
    RatingMatrix::Grid grid{
        {L, L, L, L},
        {L, L, M, M},
        {L, M, H, H},
        {L, H, C, C},
        {M, H, C, C},
    };
    return RatingMatrix("default", 1, {kLikelihoods.begin(), kLikelihoods.end()},
                        {kSeverities.begin(), kSeverities.end()}, std::move(grid));
}

Rating rate(const RatingMatrix& matrix, Likelihood likelihood, Severity severity) {
    const auto li = matrix.position(likelihood);
    const auto si = matrix.position(severity);
    if (!li || !si) {
        throw Error("LevelNotOnAxis",
                    "(" + std::string(to_code(likelihood)) + "," + std::string(to_code(severity)) +
                        ") is not on the axes of matrix '" + matrix.name() + "'",
                    {{"likelihood", to_code(likelihood)}, {"severity", to_code(severity)}});
    }
    const auto value = matrix.cell(likelihood, severity);
    if (!value) {
        throw Error("IncompleteGrid", "matrix cell (" + std::string(to_code(likelihood)) + "," +
                                          std::string(to_code(severity)) + ") is unset");
    }
    return *value;
}

std::string_view to_code(MatrixViolation::Kind kind) {
    switch (kind) {
    case MatrixViolation::Kind::EmptyAxis: return "EmptyAxis";
    case MatrixViolation::Kind::AxisOrder: return "AxisOrder";
    case MatrixViolation::Kind::IncompleteGrid: return "IncompleteGrid";
    case MatrixViolation::Kind::MonotonicityViolation: return "MonotonicityViolation";
    }
    return "?";
}

namespace {

std::string cell_name(CellRef c) {
    return "(" + std::string(to_code(c.likelihood)) + "," + std::string(to_code(c.severity)) + ")";
}

template <typename T>
bool strictly_ascending(const std::vector<T>& axis) {
    return std::adjacent_find(axis.begin(), axis.end(),
                              [](T a, T b) { return !(a < b); }) == axis.end();
}

} // namespace

std::vector<MatrixViolation> validate_matrix(const RatingMatrix& candidate) {
    using Kind = MatrixViolation::Kind;
    std::vector<MatrixViolation> out;
    const auto& l_axis = candidate.likelihood_axis();
    const auto& s_axis = candidate.severity_axis();
    const auto& grid = candidate.cells();

    if (l_axis.empty()) out.push_back({Kind::EmptyAxis, "likelihood axis is empty", {}, {}});
    if (s_axis.empty()) out.push_back({Kind::EmptyAxis, "severity axis is empty", {}, {}});
    if (!strictly_ascending(l_axis)) {
        out.push_back({Kind::AxisOrder, "likelihood axis must be strictly ascending", {}, {}});
    }
    if (!strictly_ascending(s_axis)) {
        out.push_back({Kind::AxisOrder, "severity axis must be strictly ascending", {}, {}});
    }
    if (!out.empty()) return out;

    if (grid.size() != l_axis.size()) {
        out.push_back({Kind::IncompleteGrid,
                       "grid has " + std::to_string(grid.size()) + " rows, expected " +
                           std::to_string(l_axis.size()),
                       {}, {}});
    }
    for (std::size_t li = 0; li < grid.size(); ++li) {
        if (grid[li].size() != s_axis.size() && li < l_axis.size()) {
            out.push_back({Kind::IncompleteGrid,
                           "row " + std::string(to_code(l_axis[li])) + " has " +
                               std::to_string(grid[li].size()) + " cells, expected " +
                               std::to_string(s_axis.size()),
                           {}, {}});
        }
    }
    for (Likelihood l : l_axis) {
        for (Severity s : s_axis) {
            if (!candidate.cell(l, s)) {
                const CellRef ref{l, s};
                out.push_back({Kind::IncompleteGrid, "missing cell " + cell_name(ref), ref, {}});
            }
        }
    }

    // Monotonicity over adjacent pairs; transitivity extends it to the whole grid.
    for (std::size_t li = 0; li < l_axis.size(); ++li) {
        for (std::size_t si = 0; si < s_axis.size(); ++si) {
            const CellRef here{l_axis[li], s_axis[si]};
            const auto value = candidate.cell(here.likelihood, here.severity);
            if (!value) continue;
            auto check = [&](CellRef next) {
                const auto next_value = candidate.cell(next.likelihood, next.severity);
                if (next_value && *next_value < *value) {
                    out.push_back({Kind::MonotonicityViolation,
                                   cell_name(here) + "=" + std::string(to_code(*value)) +
                                       " exceeds " + cell_name(next) + "=" +
                                       std::string(to_code(*next_value)),
                                   here, next});
                }
            };
            if (li + 1 < l_axis.size()) check({l_axis[li + 1], here.severity});
            if (si + 1 < s_axis.size()) check({here.likelihood, s_axis[si + 1]});
        }
    }
    return out;
}

void require_valid(const RatingMatrix& candidate) {
    const auto violations = validate_matrix(candidate);
    if (violations.empty()) return;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& v : violations) {
        nlohmann::json item{{"kind", to_code(v.kind)}, {"message", v.message}};
        if (v.lower) item["lower"] = {to_code(v.lower->likelihood), to_code(v.lower->severity)};
        if (v.upper) item["upper"] = {to_code(v.upper->likelihood), to_code(v.upper->severity)};
        list.push_back(std::move(item));
    }
    throw Error(std::string(to_code(violations.front().kind)),
                "rating matrix rejected: " + violations.front().message +
                    (violations.size() > 1
                         ? " (and " + std::to_string(violations.size() - 1) + " more)"
                         : std::string()),
                {{"violations", std::move(list)}});
}

} // namespace riskflow

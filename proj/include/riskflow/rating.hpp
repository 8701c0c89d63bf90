#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskflow/domain.hpp"

namespace riskflow {

/// Grid mapping (likelihood, severity) to a rating.
///
/// Axes are ascending subsets of the standard scales. Cells are indexed
/// [likelihood position][severity position] along those axes; a missing cell
/// is representable so that candidate matrices can be diagnosed, but only
/// matrices with no violations are ever installed in a register.
class RatingMatrix {
public:
    using Grid = std::vector<std::vector<std::optional<Rating>>>;

    RatingMatrix() = default;
    RatingMatrix(std::string name, std::uint32_t version, std::vector<Likelihood> likelihood_axis,
                 std::vector<Severity> severity_axis, Grid cells);

    const std::string& name() const { return name_; }
    std::uint32_t version() const { return version_; }
    const std::vector<Likelihood>& likelihood_axis() const { return likelihood_axis_; }
    const std::vector<Severity>& severity_axis() const { return severity_axis_; }
    const Grid& cells() const { return cells_; }

    std::optional<std::size_t> position(Likelihood l) const;
    std::optional<std::size_t> position(Severity s) const;

    /// Empty when either level is off-axis or the cell is unset.
    std::optional<Rating> cell(Likelihood l, Severity s) const;

    RatingMatrix with_cell(Likelihood l, Severity s, std::optional<Rating> value) const;
    RatingMatrix with_identity(std::string name, std::uint32_t version) const;

    friend bool operator==(const RatingMatrix&, const RatingMatrix&) = default;

private:
    std::string name_;
    std::uint32_t version_ = 1;
    std::vector<Likelihood> likelihood_axis_;
    std::vector<Severity> severity_axis_;
    Grid cells_;
};

/// The 5x4 reference matrix (likelihood N..VH by severity L..C).
RatingMatrix default_matrix();

/// Throws Error "LevelNotOnAxis" for off-axis levels, "IncompleteGrid" for an
/// unset cell.
Rating rate(const RatingMatrix& matrix, Likelihood likelihood, Severity severity);

struct CellRef {
    Likelihood likelihood;
    Severity severity;

    friend bool operator==(const CellRef&, const CellRef&) = default;
};

struct MatrixViolation {
    enum class Kind {
        EmptyAxis,
        AxisOrder,          // axis not strictly ascending
        IncompleteGrid,     // cell missing or grid not rectangular
        MonotonicityViolation
    };
    Kind kind;
    std::string message;
    // For MonotonicityViolation: `lower` is the cell at the smaller level and
    // carries the larger rating. For IncompleteGrid: `lower` is the missing cell.
    std::optional<CellRef> lower;
    std::optional<CellRef> upper;
};

std::string_view to_code(MatrixViolation::Kind kind);

/// Every violated completeness/ordering/monotonicity rule. Empty iff valid.
std::vector<MatrixViolation> validate_matrix(const RatingMatrix& candidate);

/// Throws Error(first violation kind) with all violations in details when the
/// candidate is invalid.
void require_valid(const RatingMatrix& candidate);

} // namespace riskflow

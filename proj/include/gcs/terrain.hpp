// Gridded ground-elevation model answering "how high is the ground here".
#pragma once

#include "gcs/geodesy.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gcs {

/// Regular height grid georeferenced through its own ENU frame anchored at
/// the south-west corner. Row 0 is the northernmost row; heights are
/// ellipsoidal metres. Immutable after construction.
class HeightField {
public:
    HeightField(const GeodeticPosition &southwest_origin, double cell_size_m, std::size_t n_cols,
                std::size_t n_rows, std::vector<double> heights);

    const GeodeticPosition &origin() const noexcept { return frame_.origin(); }
    const GeoReference &frame() const noexcept { return frame_; }
    double cell_size_m() const noexcept { return cell_size_m_; }
    std::size_t n_cols() const noexcept { return n_cols_; }
    std::size_t n_rows() const noexcept { return n_rows_; }
    double width_m() const noexcept { return cell_size_m_ * static_cast<double>(n_cols_ - 1); }
    double depth_m() const noexcept { return cell_size_m_ * static_cast<double>(n_rows_ - 1); }
    const std::vector<double> &heights() const noexcept { return heights_; }

    double node(std::size_t row, std::size_t col) const { return heights_[row * n_cols_ + col]; }
    double min_height() const noexcept { return min_height_; }
    double max_height() const noexcept { return max_height_; }

    /// Bilinear ground height below `p`; the altitude of `p` is ignored.
    /// Throws OutOfBoundsError outside the grid footprint.
    double height_at(const GeodeticPosition &p) const;

    /// Same as height_at, but returns nullopt instead of throwing.
    std::optional<double> try_height_at(const GeodeticPosition &p) const;

    /// Height at a local (east, north) offset from the south-west corner.
    std::optional<double> height_at_local(double east_m, double north_m) const;

    /// Geodetic position of the grid point at a local offset, on the ground.
    GeodeticPosition local_to_geodetic(double east_m, double north_m) const;

private:
    GeoReference frame_;
    double cell_size_m_;
    std::size_t n_cols_;
    std::size_t n_rows_;
    std::vector<double> heights_;
    double min_height_;
    double max_height_;
};

/// Free-function form of HeightField::height_at.
double height_at(const HeightField &field, const GeodeticPosition &p);

/// Parses the ASCII grid format:
///
///     ncols N
///     nrows M
///     origin_lat D
///     origin_lon D
///     cellsize_m C
///     <M rows of N whitespace-separated heights, northernmost first>
///
/// Throws ParseError carrying the offending line and column.
HeightField load_ascii_grid(std::istream &in);
HeightField load_ascii_grid_file(const std::string &path);

/// Writes the ASCII grid format; heights carry six fractional digits.
void save_ascii_grid(const HeightField &field, std::ostream &out);

struct SyntheticFieldSpec {
    double width_m = 100.0;  ///< east extent
    double depth_m = 250.0;  ///< north extent
    double slope_m = 0.0;    ///< total rise from the south edge to the north edge
    double base_m = 0.0;     ///< height along the south edge
    double cell_size_m = 1.0;
    GeodeticPosition southwest_origin{};
};

/// Linear ramp rising northwards from base_m to base_m + slope_m.
HeightField synthetic_field(const SyntheticFieldSpec &spec);

} // namespace gcs

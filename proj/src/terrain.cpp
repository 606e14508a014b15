#include "gcs/terrain.hpp"

#include "gcs/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace gcs {

namespace {

constexpr double kEdgeTolerance = 1e-6;

struct Token {
    std::string_view text;
    std::size_t column; // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i > start) {
            tokens.push_back({line.substr(start, i - start), start + 1});
        }
    }
    return tokens;
}

double parse_double(const Token &tok, std::size_t line_no) {
    double value = 0.0;
    const char *first = tok.text.data();
    const char *last = first + tok.text.size();
    if (!tok.text.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw ParseError("expected a finite number, got '" + std::string(tok.text) + "'", line_no,
                         tok.column);
    }
    return value;
}

std::size_t parse_count(const Token &tok, std::size_t line_no) {
    std::size_t value = 0;
    const char *last = tok.text.data() + tok.text.size();
    const auto [ptr, ec] = std::from_chars(tok.text.data(), last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("expected a positive integer, got '" + std::string(tok.text) + "'", line_no,
                         tok.column);
    }
    return value;
}

void write_double(std::ostream &out, double v, std::chars_format fmt, int precision) {
    std::array<char, 64> buf{};
    const auto result = precision < 0 ? std::to_chars(buf.data(), buf.data() + buf.size(), v)
                                      : std::to_chars(buf.data(), buf.data() + buf.size(), v, fmt, precision);
    out.write(buf.data(), result.ptr - buf.data());
}

} // namespace

HeightField::HeightField(const GeodeticPosition &southwest_origin, double cell_size_m, std::size_t n_cols,
                         std::size_t n_rows, std::vector<double> heights)
    : frame_(southwest_origin), cell_size_m_(cell_size_m), n_cols_(n_cols), n_rows_(n_rows),
      heights_(std::move(heights)) {
    if (n_cols_ < 2 || n_rows_ < 2) {
        throw ValidationError("HeightField: need at least 2x2 nodes");
    }
    if (!(cell_size_m_ > 0.0) || !std::isfinite(cell_size_m_)) {
        throw ValidationError("HeightField: cell size must be positive");
    }
    if (heights_.size() != n_cols_ * n_rows_) {
        throw ValidationError("HeightField: height count does not match ncols * nrows");
    }
    if (!std::all_of(heights_.begin(), heights_.end(), [](double h) { return std::isfinite(h); })) {
        throw ValidationError("HeightField: heights must be finite");
    }
    const auto [lo, hi] = std::minmax_element(heights_.begin(), heights_.end());
    min_height_ = *lo;
    max_height_ = *hi;
}

std::optional<double> HeightField::height_at_local(double east_m, double north_m) const {
    if (!(east_m >= -kEdgeTolerance && east_m <= width_m() + kEdgeTolerance &&
          north_m >= -kEdgeTolerance && north_m <= depth_m() + kEdgeTolerance)) {
        return std::nullopt;
    }
    const double col_f = std::clamp(east_m / cell_size_m_, 0.0, static_cast<double>(n_cols_ - 1));
    const double south_f = std::clamp(north_m / cell_size_m_, 0.0, static_cast<double>(n_rows_ - 1));

    const auto c0 = std::min(static_cast<std::size_t>(col_f), n_cols_ - 2);
    const auto s0 = std::min(static_cast<std::size_t>(south_f), n_rows_ - 2);
    const double tx = col_f - static_cast<double>(c0);
    const double ty = south_f - static_cast<double>(s0);

    // Rows are stored north-first.
    const std::size_t row_south = n_rows_ - 1 - s0;
    const std::size_t row_north = row_south - 1;
    const double h00 = node(row_south, c0);
    const double h10 = node(row_south, c0 + 1);
    const double h01 = node(row_north, c0);
    const double h11 = node(row_north, c0 + 1);
    const double south = h00 + (h10 - h00) * tx;
    const double north = h01 + (h11 - h01) * tx;
    return south + (north - south) * ty;
}

std::optional<double> HeightField::try_height_at(const GeodeticPosition &p) const {
    GeodeticPosition ground = p;
    ground.altitude_m = frame_.origin().altitude_m;
    const EnuVector local = frame_.to_enu(ground);
    return height_at_local(local.east_m, local.north_m);
}

double HeightField::height_at(const GeodeticPosition &p) const {
    if (auto h = try_height_at(p)) {
        return *h;
    }
    throw OutOfBoundsError("height_at: position (" + std::to_string(p.latitude_deg) + ", " +
                           std::to_string(p.longitude_deg) + ") is outside the terrain footprint");
}

GeodeticPosition HeightField::local_to_geodetic(double east_m, double north_m) const {
    GeodeticPosition p = frame_.to_geodetic({east_m, north_m, 0.0});
    p.altitude_m = height_at_local(east_m, north_m).value_or(frame_.origin().altitude_m);
    return p;
}

double height_at(const HeightField &field, const GeodeticPosition &p) { return field.height_at(p); }

HeightField load_ascii_grid(std::istream &in) {
    static constexpr std::array<std::string_view, 5> kKeys = {"ncols", "nrows", "origin_lat", "origin_lon",
                                                              "cellsize_m"};
    std::string line;
    std::size_t line_no = 0;
    std::array<double, 5> header{};

    for (std::size_t k = 0; k < kKeys.size(); ++k) {
        if (!std::getline(in, line)) {
            throw ParseError("missing header field '" + std::string(kKeys[k]) + "'", line_no + 1);
        }
        ++line_no;
        const auto tokens = tokenize(line);
        if (tokens.empty() || tokens[0].text != kKeys[k]) {
            throw ParseError("expected header field '" + std::string(kKeys[k]) + "'", line_no,
                             tokens.empty() ? 1 : tokens[0].column);
        }
        if (tokens.size() != 2) {
            throw ParseError("header field '" + std::string(kKeys[k]) + "' takes exactly one value", line_no,
                             tokens.size() > 2 ? tokens[2].column : line.size() + 1);
        }
        header[k] = k < 2 ? static_cast<double>(parse_count(tokens[1], line_no)) : parse_double(tokens[1], line_no);
    }

    const auto n_cols = static_cast<std::size_t>(header[0]);
    const auto n_rows = static_cast<std::size_t>(header[1]);
    if (n_cols < 2 || n_rows < 2) {
        throw ParseError("grid must have at least 2 columns and 2 rows", n_cols < 2 ? 1 : 2);
    }
    if (!(header[4] > 0.0)) {
        throw ParseError("cellsize_m must be positive", 5);
    }
    const GeodeticPosition origin{header[2], header[3], 0.0};
    if (!is_valid(origin)) {
        throw ParseError("origin is not a valid latitude/longitude", 3);
    }

    std::vector<double> heights;
    heights.reserve(n_cols * n_rows);
    for (std::size_t row = 0; row < n_rows; ++row) {
        if (!std::getline(in, line)) {
            throw ParseError("missing grid row " + std::to_string(row) + " of " + std::to_string(n_rows),
                             line_no + 1);
        }
        ++line_no;
        const auto tokens = tokenize(line);
        if (tokens.size() != n_cols) {
            throw ParseError("grid row " + std::to_string(row) + " has " + std::to_string(tokens.size()) +
                                 " values, expected " + std::to_string(n_cols),
                             line_no, tokens.size() > n_cols ? tokens[n_cols].column : line.size() + 1);
        }
        for (const auto &tok : tokens) {
            heights.push_back(parse_double(tok, line_no));
        }
    }
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = tokenize(line);
        if (!tokens.empty()) {
            throw ParseError("unexpected content after the last grid row", line_no, tokens[0].column);
        }
    }

    return HeightField(origin, header[4], n_cols, n_rows, std::move(heights));
}

HeightField load_ascii_grid_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open terrain file '" + path + "'");
    }
    return load_ascii_grid(in);
}

void save_ascii_grid(const HeightField &field, std::ostream &out) {
    out << "ncols " << field.n_cols() << '\n' << "nrows " << field.n_rows() << '\n' << "origin_lat ";
    write_double(out, field.origin().latitude_deg, std::chars_format::general, -1);
    out << "\norigin_lon ";
    write_double(out, field.origin().longitude_deg, std::chars_format::general, -1);
    out << "\ncellsize_m ";
    write_double(out, field.cell_size_m(), std::chars_format::general, -1);
    out << '\n';
    for (std::size_t row = 0; row < field.n_rows(); ++row) {
        for (std::size_t col = 0; col < field.n_cols(); ++col) {
            if (col != 0) {
                out << ' ';
            }
            write_double(out, field.node(row, col), std::chars_format::fixed, 6);
        }
        out << '\n';
    }
}

HeightField synthetic_field(const SyntheticFieldSpec &spec) {
    if (!(spec.width_m > 0.0) || !(spec.depth_m > 0.0) || !(spec.cell_size_m > 0.0)) {
        throw ValidationError("synthetic_field: extents and cell size must be positive");
    }
    const auto n_cols = static_cast<std::size_t>(std::ceil(spec.width_m / spec.cell_size_m - 1e-9)) + 1;
    const auto n_rows = static_cast<std::size_t>(std::ceil(spec.depth_m / spec.cell_size_m - 1e-9)) + 1;
    std::vector<double> heights(n_cols * n_rows);
    for (std::size_t row = 0; row < n_rows; ++row) {
        const double north = spec.cell_size_m * static_cast<double>(n_rows - 1 - row);
        const double fraction = std::min(north / spec.depth_m, 1.0);
        const double h = spec.base_m + spec.slope_m * fraction;
        std::fill_n(heights.begin() + static_cast<std::ptrdiff_t>(row * n_cols), n_cols, h);
    }
    GeodeticPosition origin = spec.southwest_origin;
    origin.altitude_m = 0.0;
    return HeightField(origin, spec.cell_size_m, n_cols, n_rows, std::move(heights));
}

} // namespace gcs

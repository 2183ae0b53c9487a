#pragma once

// Terrain zones over the 128x128 grid, loaded from a colour-coded portable
// pixmap plus a legend of `R G B zone_name` lines.
//
// Orientation: pixel (col, row) holds cell (x = col, y = 127 - row), so the
// top image row is the northern edge of the map.

#include "mobatrack/core.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mobatrack {

enum class ZoneLabel : std::uint8_t {
    BaseRadiant,
    BaseDire,
    River,
    Jungle,
    LaneShop,
    SecretShop,
    TopLane,
    MiddleLane,
    BottomLane,
    Pit,
    Void,
};

inline constexpr std::size_t kZoneCount = 11;

inline constexpr std::array<ZoneLabel, kZoneCount> kZoneLabels = {
    ZoneLabel::BaseRadiant, ZoneLabel::BaseDire,   ZoneLabel::River,      ZoneLabel::Jungle,
    ZoneLabel::LaneShop,    ZoneLabel::SecretShop, ZoneLabel::TopLane,    ZoneLabel::MiddleLane,
    ZoneLabel::BottomLane,  ZoneLabel::Pit,        ZoneLabel::Void,
};

/// Legend names: base_Radiant, base_Dire, river, jungle, lane_Shop,
/// secret_Shop, top_Lane, middle_Lane, bottom_Lane, pit, void.
std::string_view to_string(ZoneLabel z);
ZoneLabel parse_zone(std::string_view name);

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend auto operator<=>(const Rgb&, const Rgb&) = default;
};

/// Minimal PPM image (P3 ASCII or P6 binary).
struct Pixmap {
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<Rgb> pixels;  // row-major, top row first

    const Rgb& at(int col, int row) const { return pixels[static_cast<std::size_t>(row) * width + col]; }

    friend bool operator==(const Pixmap&, const Pixmap&) = default;
};

enum class PpmEncoding { Ascii, Binary };

Pixmap read_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_ppm(const Pixmap& image, PpmEncoding encoding = PpmEncoding::Binary);

/// Colour -> zone legend. Colours are unique and every zone appears once.
class ZoneLegend {
public:
    ZoneLegend() = default;

    static ZoneLegend parse(std::string_view text);

    /// Built-in palette used by the reference map and the draft builder.
    static ZoneLegend standard();

    void add(Rgb color, ZoneLabel zone);
    std::optional<ZoneLabel> find(Rgb color) const;
    Rgb color_of(ZoneLabel zone) const;
    bool complete() const;

    std::string to_text() const;

private:
    std::map<Rgb, ZoneLabel> by_color_;
    std::array<std::optional<Rgb>, kZoneCount> by_zone_{};
};

class ZoneMap {
public:
    using Grid = std::array<ZoneLabel, static_cast<std::size_t>(kGridSize) * kGridSize>;

    /// Takes a fully labelled grid indexed by GridCell::index().
    ZoneMap(const Grid& grid, ZoneLegend legend);

    /// Parses a PPM and a legend. Throws FormatError on wrong dimensions,
    /// pixels whose colour is not in the legend, or a malformed legend.
    static ZoneMap load(std::span<const std::uint8_t> pixmap_bytes, std::string_view legend_text);

    ZoneLabel zone_of(GridCell cell) const { return (*grid_)[cell.index()]; }

    const ZoneLegend& legend() const { return legend_; }

    /// Renders the grid back through the legend (maxval 255).
    Pixmap render() const;

    /// Cells carrying `zone`, ordered by index.
    std::vector<GridCell> cells_of(ZoneLabel zone) const;

private:
    std::shared_ptr<const Grid> grid_;
    ZoneLegend legend_;
};

/// Hand-drawn approximation of the standard map: bases in opposite corners,
/// three lanes, a diagonal river with the pit, shops, jungle elsewhere and a
/// void border.
ZoneMap reference_zone_map();

/// Draft map from observed positions: visited cells become jungle, the
/// rest void. Meant as a starting point for manual painting.
ZoneMap draft_zone_map(std::span<const MatchRecord> matches);

}  // namespace mobatrack

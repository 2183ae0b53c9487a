#include "mobatrack/zonemap.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace mobatrack {

namespace {

constexpr std::array<std::string_view, kZoneCount> kZoneNames = {
    "base_Radiant", "base_Dire",   "river",       "jungle",      "lane_Shop", "secret_Shop",
    "top_Lane",     "middle_Lane", "bottom_Lane", "pit",         "void",
};

class PpmTokenizer {
public:
    explicit PpmTokenizer(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }

    // Skips whitespace and '#' comments before a header token.
    void skip_space() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    int number(const char* what) {
        skip_space();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw FormatError(std::string("PPM: expected ") + what + " at byte " + std::to_string(pos_));
        }
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1'000'000) throw FormatError(std::string("PPM: ") + what + " too large");
            ++pos_;
        }
        return static_cast<int>(v);
    }

    std::uint8_t raw() {
        if (pos_ >= bytes_.size()) throw FormatError("PPM: truncated pixel data");
        return bytes_[pos_++];
    }

    void expect_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw FormatError("PPM: expected whitespace after maxval");
        }
        ++pos_;
    }

    bool only_space_left() {
        while (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) ++pos_;
        return pos_ == bytes_.size();
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

std::string_view to_string(ZoneLabel z) { return kZoneNames[static_cast<std::size_t>(z)]; }

ZoneLabel parse_zone(std::string_view name) {
    for (std::size_t i = 0; i < kZoneCount; ++i) {
        if (kZoneNames[i] == name) return static_cast<ZoneLabel>(i);
    }
    throw FormatError("unknown zone name '" + std::string(name) + "'");
}

Pixmap read_ppm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '3' && bytes[1] != '6')) {
        throw FormatError("PPM: expected P3 or P6 magic");
    }
    const bool binary = bytes[1] == '6';
    PpmTokenizer tok(bytes.subspan(2));

    Pixmap img;
    img.width = tok.number("width");
    img.height = tok.number("height");
    img.maxval = tok.number("maxval");
    if (img.width <= 0 || img.height <= 0) throw FormatError("PPM: empty image");
    if (img.maxval <= 0 || img.maxval > 255) throw FormatError("PPM: only 8-bit maxval (1..255) is supported");

    const auto count = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
    img.pixels.resize(count);
    auto sample = [&]() -> std::uint8_t {
        const int v = binary ? tok.raw() : tok.number("sample");
        if (v > img.maxval) throw FormatError("PPM: sample exceeds maxval");
        return static_cast<std::uint8_t>(v);
    };
    if (binary) tok.expect_single_space();
    for (auto& px : img.pixels) {
        px.r = sample();
        px.g = sample();
        px.b = sample();
    }
    if (binary ? tok.offset() + 2 != bytes.size() : !tok.only_space_left()) {
        throw FormatError("PPM: trailing data after pixels");
    }
    return img;
}

std::vector<std::uint8_t> write_ppm(const Pixmap& image, PpmEncoding encoding) {
    std::ostringstream os;
    const bool binary = encoding == PpmEncoding::Binary;
    os << (binary ? "P6" : "P3") << '\n' << image.width << ' ' << image.height << '\n' << image.maxval << '\n';
    std::string head = os.str();
    std::vector<std::uint8_t> out(head.begin(), head.end());
    if (binary) {
        out.reserve(out.size() + image.pixels.size() * 3);
        for (const auto& p : image.pixels) {
            out.push_back(p.r);
            out.push_back(p.g);
            out.push_back(p.b);
        }
        return out;
    }
    std::string body;
    for (int row = 0; row < image.height; ++row) {
        for (int col = 0; col < image.width; ++col) {
            const auto& p = image.at(col, row);
            if (col > 0) body += ' ';
            body += std::to_string(p.r) + ' ' + std::to_string(p.g) + ' ' + std::to_string(p.b);
        }
        body += '\n';
    }
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

ZoneLegend ZoneLegend::parse(std::string_view text) {
    ZoneLegend legend;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string line = trim(text.substr(start, end - start));
        start = end + 1;
        if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;

        std::istringstream is(line);
        int r = -1;
        int g = -1;
        int b = -1;
        std::string name;
        std::string extra;
        if (!(is >> r >> g >> b >> name) || (is >> extra)) {
            throw FormatError("legend line " + std::to_string(line_no) + ": expected 'R G B zone_name'");
        }
        if (r < 0 || r > 255 || g < 0 || g > 255 || b < 0 || b > 255) {
            throw FormatError("legend line " + std::to_string(line_no) + ": colour component outside 0..255");
        }
        try {
            legend.add(Rgb{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)},
                       parse_zone(name));
        } catch (const FormatError& e) {
            throw FormatError("legend line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!legend.complete()) {
        std::string missing;
        for (auto z : kZoneLabels) {
            if (!legend.by_zone_[static_cast<std::size_t>(z)]) missing += " " + std::string(to_string(z));
        }
        throw FormatError("legend does not define every zone; missing:" + missing);
    }
    return legend;
}

ZoneLegend ZoneLegend::standard() {
    ZoneLegend l;
    l.add({0, 170, 0}, ZoneLabel::BaseRadiant);
    l.add({170, 0, 0}, ZoneLabel::BaseDire);
    l.add({0, 110, 255}, ZoneLabel::River);
    l.add({0, 90, 40}, ZoneLabel::Jungle);
    l.add({255, 200, 0}, ZoneLabel::LaneShop);
    l.add({200, 0, 200}, ZoneLabel::SecretShop);
    l.add({255, 130, 0}, ZoneLabel::TopLane);
    l.add({255, 255, 120}, ZoneLabel::MiddleLane);
    l.add({0, 230, 230}, ZoneLabel::BottomLane);
    l.add({110, 60, 20}, ZoneLabel::Pit);
    l.add({0, 0, 0}, ZoneLabel::Void);
    return l;
}

void ZoneLegend::add(Rgb color, ZoneLabel zone) {
    if (by_color_.contains(color)) {
        throw FormatError("duplicate legend colour " + std::to_string(color.r) + " " + std::to_string(color.g) + " " +
                          std::to_string(color.b));
    }
    auto& slot = by_zone_[static_cast<std::size_t>(zone)];
    if (slot) throw FormatError("zone " + std::string(to_string(zone)) + " listed twice in legend");
    by_color_.emplace(color, zone);
    slot = color;
}

std::optional<ZoneLabel> ZoneLegend::find(Rgb color) const {
    if (auto it = by_color_.find(color); it != by_color_.end()) return it->second;
    return std::nullopt;
}

Rgb ZoneLegend::color_of(ZoneLabel zone) const {
    const auto& c = by_zone_[static_cast<std::size_t>(zone)];
    if (!c) throw std::logic_error("zone " + std::string(to_string(zone)) + " has no legend colour");
    return *c;
}

bool ZoneLegend::complete() const {
    for (const auto& c : by_zone_) {
        if (!c) return false;
    }
    return true;
}

std::string ZoneLegend::to_text() const {
    std::string out = "# R G B zone_name\n";
    for (auto z : kZoneLabels) {
        const Rgb c = color_of(z);
        out += std::to_string(c.r) + ' ' + std::to_string(c.g) + ' ' + std::to_string(c.b) + ' ' +
               std::string(to_string(z)) + '\n';
    }
    return out;
}

ZoneMap::ZoneMap(const Grid& grid, ZoneLegend legend)
    : grid_(std::make_shared<const Grid>(grid)), legend_(std::move(legend)) {
    if (!legend_.complete()) throw std::invalid_argument("zone map legend must define every zone");
}

ZoneMap ZoneMap::load(std::span<const std::uint8_t> pixmap_bytes, std::string_view legend_text) {
    ZoneLegend legend = ZoneLegend::parse(legend_text);
    const Pixmap img = read_ppm(pixmap_bytes);
    if (img.width != kGridSize || img.height != kGridSize) {
        throw FormatError("zone image must be 128x128, got " + std::to_string(img.width) + "x" +
                          std::to_string(img.height));
    }
    Grid grid;
    for (int row = 0; row < kGridSize; ++row) {
        for (int col = 0; col < kGridSize; ++col) {
            const Rgb px = img.at(col, row);
            const auto zone = legend.find(px);
            if (!zone) {
                throw FormatError("pixel (" + std::to_string(col) + "," + std::to_string(row) + ") colour " +
                                  std::to_string(px.r) + " " + std::to_string(px.g) + " " + std::to_string(px.b) +
                                  " not in legend");
            }
            grid[GridCell(col, kMaxCellIndex - row).index()] = *zone;
        }
    }
    return ZoneMap(grid, std::move(legend));
}

Pixmap ZoneMap::render() const {
    Pixmap img;
    img.width = kGridSize;
    img.height = kGridSize;
    img.maxval = 255;
    img.pixels.resize(static_cast<std::size_t>(kGridSize) * kGridSize);
    for (int row = 0; row < kGridSize; ++row) {
        for (int col = 0; col < kGridSize; ++col) {
            img.pixels[static_cast<std::size_t>(row) * kGridSize + col] =
                legend_.color_of(zone_of(GridCell(col, kMaxCellIndex - row)));
        }
    }
    return img;
}

std::vector<GridCell> ZoneMap::cells_of(ZoneLabel zone) const {
    std::vector<GridCell> out;
    for (int x = 0; x < kGridSize; ++x) {
        for (int y = 0; y < kGridSize; ++y) {
            if ((*grid_)[GridCell(x, y).index()] == zone) out.emplace_back(x, y);
        }
    }
    return out;
}

ZoneMap reference_zone_map() {
    ZoneMap::Grid grid;
    grid.fill(ZoneLabel::Void);
    auto paint = [&](auto&& pred, ZoneLabel z) {
        for (int x = 0; x < kGridSize; ++x) {
            for (int y = 0; y < kGridSize; ++y) {
                if (pred(x, y)) grid[GridCell(x, y).index()] = z;
            }
        }
    };
    auto box = [](int x0, int x1, int y0, int y1) {
        return [=](int x, int y) { return x >= x0 && x <= x1 && y >= y0 && y <= y1; };
    };
    const auto interior = box(8, 119, 8, 119);

    paint(interior, ZoneLabel::Jungle);
    paint([&](int x, int y) { return interior(x, y) && std::abs(x + y - 127) <= 3; }, ZoneLabel::River);
    paint([&](int x, int y) { return box(8, 17, 28, 119)(x, y) || box(8, 99, 110, 119)(x, y); }, ZoneLabel::TopLane);
    paint([&](int x, int y) { return box(28, 119, 8, 17)(x, y) || box(110, 119, 8, 99)(x, y); },
          ZoneLabel::BottomLane);
    paint([&](int x, int y) { return interior(x, y) && std::abs(x - y) <= 4; }, ZoneLabel::MiddleLane);
    paint(box(8, 31, 8, 31), ZoneLabel::BaseRadiant);
    paint(box(96, 119, 96, 119), ZoneLabel::BaseDire);
    paint([&](int x, int y) { return box(18, 21, 84, 89)(x, y) || box(106, 109, 38, 43)(x, y); },
          ZoneLabel::LaneShop);
    paint([&](int x, int y) { return box(34, 38, 74, 78)(x, y) || box(89, 93, 49, 53)(x, y); },
          ZoneLabel::SecretShop);
    paint(box(50, 54, 78, 82), ZoneLabel::Pit);
    return ZoneMap(grid, ZoneLegend::standard());
}

ZoneMap draft_zone_map(std::span<const MatchRecord> matches) {
    ZoneMap::Grid grid;
    grid.fill(ZoneLabel::Void);
    for (const auto& m : matches) {
        for (const auto& t : m.tracks()) {
            for (const auto c : t.cells()) grid[c.index()] = ZoneLabel::Jungle;
        }
    }
    return ZoneMap(grid, ZoneLegend::standard());
}

}  // namespace mobatrack

#pragma once

#include "wander/geometry.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wander {

inline constexpr double kGridResolution = 0.25;  // meters per cell
inline constexpr double kAgentRadius = 0.3;
inline constexpr int kInflationCells = 2;        // ceil(kAgentRadius / kGridResolution)
inline constexpr double kViewingRange = 2.0;     // max distance artwork -> viewing cell
inline constexpr double kViewingDistance = 1.5;  // preferred standing distance
inline constexpr double kArtworkWidth = 1.0;     // wall segment each artwork occupies

// Highlightable area of an artwork image. rect is (x, y, w, h) in normalized
// image coordinates.
struct Region {
    std::string name;
    std::array<double, 4> rect{};
    std::string note;
};

struct Artwork {
    std::string id;
    std::string name;
    std::string author;
    int year = 0;
    std::string style;
    std::string description;
    Vec3 position;
    Vec2 facing;
    std::vector<Region> regions;
    double popularity = 0.0;
    std::uint64_t visit_count = 0;

    // Region lookup by normalized name.
    const Region* find_region(std::string_view name) const;
};

struct Bounds {
    double x0 = 0.0;
    double y0 = 0.0;
    double w = 0.0;
    double h = 0.0;

    bool contains(Vec2 p) const
    {
        return p.x >= x0 && p.x <= x0 + w && p.y >= y0 && p.y <= y0 + h;
    }
};

using Polygon = std::vector<Vec2>;

// Traversability bitmask over the floor. Cell (col, row) covers
// [origin.x + col*res, origin.x + (col+1)*res) x [origin.y + row*res, ...).
class OccupancyGrid {
public:
    OccupancyGrid() = default;
    OccupancyGrid(int width, int height, double resolution, Vec2 origin = {});

    // Test helper: '#' marks a blocked cell, anything else is free. Row 0 is
    // the first string.
    static OccupancyGrid from_rows(const std::vector<std::string>& rows, double resolution = 1.0);

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }
    Vec2 origin() const { return origin_; }

    bool in_range(Cell c) const { return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_; }
    bool traversable(Cell c) const { return in_range(c) && !blocked_[index(c)]; }
    void set_blocked(Cell c, bool blocked) { blocked_[index(c)] = blocked; }

    // An 8-connected step from `from` by (dc, dr). Diagonal steps may not cut
    // a blocked corner.
    bool can_step(Cell from, int dc, int dr) const;

    Cell cell_of(Vec2 p) const;
    Vec2 center(Cell c) const;
    std::size_t index(Cell c) const { return static_cast<std::size_t>(c.row) * width_ + c.col; }
    std::size_t blocked_count() const;

    // True when every cell the segment a-b touches is traversable. Segments
    // passing exactly through a cell corner test both side cells.
    bool segment_clear(Vec2 a, Vec2 b) const;

private:
    int width_ = 0;
    int height_ = 0;
    double resolution_ = 1.0;
    Vec2 origin_;
    std::vector<bool> blocked_;
};

enum class SortKey { Popularity, Distance, Id };

struct ArtworkFilter {
    std::optional<std::string> style;
    std::optional<std::string> author;
    SortKey sort_by = SortKey::Id;
    Vec2 from;  // reference point for SortKey::Distance
    std::size_t limit = 1;
};

// Immutable after load. Shared read-only across sessions.
class MuseumWorld {
public:
    static MuseumWorld from_json(const nlohmann::json& doc);

    const Bounds& bounds() const { return bounds_; }
    const std::vector<Polygon>& obstacles() const { return obstacles_; }
    const std::vector<Artwork>& artworks() const { return artworks_; }
    Vec2 spawn() const { return spawn_; }
    const OccupancyGrid& grid() const { return grid_; }

    // Arrival cell for an artwork: nearest traversable cell within
    // kViewingRange in front of it, with line of sight.
    Cell viewing_cell(const Artwork& a) const;
    Vec2 viewing_point(const Artwork& a) const { return grid_.center(viewing_cell(a)); }

    std::optional<std::size_t> index_of(std::string_view id) const;

    // Exact id wins, then normalized name. nullptr when nothing matches.
    const Artwork* find_artwork(std::string_view query) const;

    std::vector<const Artwork*> artworks_by_filter(const ArtworkFilter& filter) const;

    // Artworks whose id or name occurs in free text, in order of first
    // mention.
    std::vector<const Artwork*> mentioned_in(std::string_view text) const;

    nlohmann::json to_json() const;

private:
    Bounds bounds_;
    Vec2 spawn_;
    std::vector<Polygon> obstacles_;
    std::vector<Artwork> artworks_;
    std::vector<std::string> normalized_names_;
    std::vector<Cell> viewing_cells_;
    OccupancyGrid grid_;
};

MuseumWorld load_museum(const std::filesystem::path& path);

// Mutable social statistics kept apart from the immutable world. Seeded from
// the authored visit counts; increments are atomic.
class VisitStats {
public:
    explicit VisitStats(const MuseumWorld& world);

    void record_visit(std::size_t artwork_index);
    std::uint64_t count(std::size_t artwork_index) const;

private:
    std::unique_ptr<std::atomic<std::uint64_t>[]> counts_;
    std::size_t size_ = 0;
};

}  // namespace wander

#include "wander/world.hpp"

#include "wander/errors.hpp"
#include "wander/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <set>

namespace wander {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Artwork

const Region* Artwork::find_region(std::string_view name) const
{
    auto wanted = text::normalize(name);
    for (const auto& r : regions)
        if (text::normalize(r.name) == wanted) return &r;
    return nullptr;
}

// ---------------------------------------------------------------------------
// OccupancyGrid

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, Vec2 origin)
    : width_(width), height_(height), resolution_(resolution), origin_(origin),
      blocked_(static_cast<std::size_t>(width) * height, false)
{
    if (width <= 0 || height <= 0 || resolution <= 0.0)
        throw PreconditionError("occupancy grid needs positive dimensions");
}

OccupancyGrid OccupancyGrid::from_rows(const std::vector<std::string>& rows, double resolution)
{
    if (rows.empty()) throw PreconditionError("grid needs at least one row");
    OccupancyGrid g(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()), resolution);
    for (int r = 0; r < g.height_; ++r) {
        if (static_cast<int>(rows[r].size()) != g.width_) throw PreconditionError("ragged grid rows");
        for (int c = 0; c < g.width_; ++c) g.set_blocked({c, r}, rows[r][c] == '#');
    }
    return g;
}

bool OccupancyGrid::can_step(Cell from, int dc, int dr) const
{
    Cell to{from.col + dc, from.row + dr};
    if (!traversable(to)) return false;
    if (dc != 0 && dr != 0)
        return traversable({from.col + dc, from.row}) && traversable({from.col, from.row + dr});
    return true;
}

Cell OccupancyGrid::cell_of(Vec2 p) const
{
    int c = static_cast<int>(std::floor((p.x - origin_.x) / resolution_));
    int r = static_cast<int>(std::floor((p.y - origin_.y) / resolution_));
    // The far bounds edge belongs to the last cell.
    if (c == width_ && p.x - origin_.x <= width_ * resolution_ + 1e-9) c = width_ - 1;
    if (r == height_ && p.y - origin_.y <= height_ * resolution_ + 1e-9) r = height_ - 1;
    return {c, r};
}

Vec2 OccupancyGrid::center(Cell c) const
{
    return {origin_.x + (c.col + 0.5) * resolution_, origin_.y + (c.row + 0.5) * resolution_};
}

std::size_t OccupancyGrid::blocked_count() const
{
    return static_cast<std::size_t>(std::count(blocked_.begin(), blocked_.end(), true));
}

bool OccupancyGrid::segment_clear(Vec2 a, Vec2 b) const
{
    const double gx = (a.x - origin_.x) / resolution_;
    const double gy = (a.y - origin_.y) / resolution_;
    const double dx = (b.x - a.x) / resolution_;
    const double dy = (b.y - a.y) / resolution_;

    Cell cur = cell_of(a);
    const Cell end = cell_of(b);

    // Runs exactly along a grid line touch the cells on both sides.
    const bool on_row_line = dy == 0.0 && std::abs(gy - std::round(gy)) < 1e-9;
    const bool on_col_line = dx == 0.0 && std::abs(gx - std::round(gx)) < 1e-9;
    auto check = [&](Cell c) {
        if (!traversable(c)) return false;
        if (on_row_line && !traversable({c.col, static_cast<int>(std::round(gy)) - 1})) return false;
        if (on_col_line && !traversable({static_cast<int>(std::round(gx)) - 1, c.row})) return false;
        return true;
    };

    if (!check(cur)) return false;

    const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double delta_x = step_x ? 1.0 / std::abs(dx) : inf;
    const double delta_y = step_y ? 1.0 / std::abs(dy) : inf;
    double t_x = step_x > 0 ? (cur.col + 1 - gx) / dx : (step_x < 0 ? (gx - cur.col) / -dx : inf);
    double t_y = step_y > 0 ? (cur.row + 1 - gy) / dy : (step_y < 0 ? (gy - cur.row) / -dy : inf);

    int guard = std::abs(end.col - cur.col) + std::abs(end.row - cur.row) + 4;
    while (!(cur == end) && guard-- > 0) {
        double t = std::min(t_x, t_y);
        if (t > 1.0 + 1e-12) break;
        if (std::abs(t_x - t_y) < 1e-12) {
            if (!check({cur.col + step_x, cur.row}) || !check({cur.col, cur.row + step_y})) return false;
            cur.col += step_x;
            cur.row += step_y;
            t_x += delta_x;
            t_y += delta_y;
        } else if (t_x < t_y) {
            cur.col += step_x;
            t_x += delta_x;
        } else {
            cur.row += step_y;
            t_y += delta_y;
        }
        if (!check(cur)) return false;
    }
    return check(end);
}

// ---------------------------------------------------------------------------
// Geometry helpers for rasterization

namespace {

// Liang-Barsky: does segment p-q touch the closed box?
bool segment_hits_box(Vec2 p, Vec2 q, double x0, double y0, double x1, double y1)
{
    double t0 = 0.0;
    double t1 = 1.0;
    const double d[2] = {q.x - p.x, q.y - p.y};
    const double lo[2] = {x0 - p.x, y0 - p.y};
    const double hi[2] = {x1 - p.x, y1 - p.y};
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (lo[axis] > 0.0 || hi[axis] < 0.0) return false;
            continue;
        }
        double a = lo[axis] / d[axis];
        double b = hi[axis] / d[axis];
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
        if (t0 > t1) return false;
    }
    return true;
}

bool point_in_polygon(Vec2 p, const Polygon& poly)
{
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

double cross(Vec2 o, Vec2 a, Vec2 b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2)
{
    double d1 = cross(q1, q2, p1);
    double d2 = cross(q1, q2, p2);
    double d3 = cross(p1, p2, q1);
    double d4 = cross(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    auto on_seg = [](Vec2 a, Vec2 b, Vec2 c) {
        return std::min(a.x, b.x) - 1e-12 <= c.x && c.x <= std::max(a.x, b.x) + 1e-12 &&
               std::min(a.y, b.y) - 1e-12 <= c.y && c.y <= std::max(a.y, b.y) + 1e-12;
    };
    if (std::abs(d1) < 1e-12 && on_seg(q1, q2, p1)) return true;
    if (std::abs(d2) < 1e-12 && on_seg(q1, q2, p2)) return true;
    if (std::abs(d3) < 1e-12 && on_seg(p1, p2, q1)) return true;
    if (std::abs(d4) < 1e-12 && on_seg(p1, p2, q2)) return true;
    return false;
}

bool segment_hits_polygon(Vec2 a, Vec2 b, const Polygon& poly)
{
    if (point_in_polygon(a, poly) || point_in_polygon(b, poly)) return true;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
        if (segments_intersect(a, b, poly[j], poly[i])) return true;
    return false;
}

struct Segment {
    Vec2 a;
    Vec2 b;
};

Segment wall_segment(const Artwork& art)
{
    const Vec2 p = art.position.floor();
    const Vec2 along{-art.facing.y, art.facing.x};
    return {p - along * (kArtworkWidth / 2), p + along * (kArtworkWidth / 2)};
}

// Marks every cell the polygon overlaps.
void rasterize_polygon(const Polygon& poly, const OccupancyGrid& grid, std::vector<bool>& raw)
{
    double min_x = poly[0].x, max_x = poly[0].x, min_y = poly[0].y, max_y = poly[0].y;
    for (auto v : poly) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
        min_y = std::min(min_y, v.y);
        max_y = std::max(max_y, v.y);
    }
    const Cell lo = grid.cell_of({min_x, min_y});
    const Cell hi = grid.cell_of({max_x, max_y});
    const double res = grid.resolution();
    for (int r = std::max(0, lo.row); r <= std::min(grid.height() - 1, hi.row); ++r) {
        for (int c = std::max(0, lo.col); c <= std::min(grid.width() - 1, hi.col); ++c) {
            const double x0 = grid.origin().x + c * res;
            const double y0 = grid.origin().y + r * res;
            bool hit = point_in_polygon(grid.center({c, r}), poly);
            for (std::size_t i = 0, j = poly.size() - 1; !hit && i < poly.size(); j = i++)
                hit = segment_hits_box(poly[j], poly[i], x0, y0, x0 + res, y0 + res);
            if (hit) raw[grid.index({c, r})] = true;
        }
    }
}

void rasterize_segment(Segment s, const OccupancyGrid& grid, std::vector<bool>& raw)
{
    const Cell lo = grid.cell_of({std::min(s.a.x, s.b.x), std::min(s.a.y, s.b.y)});
    const Cell hi = grid.cell_of({std::max(s.a.x, s.b.x), std::max(s.a.y, s.b.y)});
    const double res = grid.resolution();
    for (int r = std::max(0, lo.row); r <= std::min(grid.height() - 1, hi.row); ++r) {
        for (int c = std::max(0, lo.col); c <= std::min(grid.width() - 1, hi.col); ++c) {
            const double x0 = grid.origin().x + c * res;
            const double y0 = grid.origin().y + r * res;
            if (segment_hits_box(s.a, s.b, x0, y0, x0 + res, y0 + res)) raw[grid.index({c, r})] = true;
        }
    }
}

OccupancyGrid build_grid(const Bounds& bounds, const std::vector<Polygon>& obstacles,
                         const std::vector<Artwork>& artworks)
{
    const int width = static_cast<int>(std::ceil(bounds.w / kGridResolution - 1e-9));
    const int height = static_cast<int>(std::ceil(bounds.h / kGridResolution - 1e-9));
    OccupancyGrid grid(width, height, kGridResolution, {bounds.x0, bounds.y0});

    std::vector<bool> raw(static_cast<std::size_t>(width) * height, false);
    for (const auto& poly : obstacles) rasterize_polygon(poly, grid, raw);
    for (const auto& art : artworks) rasterize_segment(wall_segment(art), grid, raw);

    // Inflate by a disc of kInflationCells.
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            if (!raw[grid.index({c, r})]) continue;
            for (int dr = -kInflationCells; dr <= kInflationCells; ++dr) {
                for (int dc = -kInflationCells; dc <= kInflationCells; ++dc) {
                    if (dc * dc + dr * dr > kInflationCells * kInflationCells) continue;
                    Cell n{c + dc, r + dr};
                    if (grid.in_range(n)) grid.set_blocked(n, true);
                }
            }
        }
    }
    return grid;
}

// ---------------------------------------------------------------------------
// JSON parsing

template <typename T>
T get_field(const json& obj, const char* key, const std::string& context)
{
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(fmt::format("{}: missing '{}'", context, key));
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        throw ParseError(fmt::format("{}: bad '{}': {}", context, key, e.what()));
    }
}

Vec2 get_vec2(const json& v, const std::string& context)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ParseError(context + ": expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

Artwork parse_artwork(const json& a, std::size_t index)
{
    if (!a.is_object()) throw ParseError(fmt::format("artworks[{}]: expected object", index));
    Artwork art;
    art.id = get_field<std::string>(a, "id", fmt::format("artworks[{}]", index));
    const std::string ctx = "artwork '" + art.id + "'";
    art.name = get_field<std::string>(a, "name", ctx);
    art.author = a.value("author", "");
    art.year = a.value("year", 0);
    art.style = a.value("style", "");
    art.description = a.value("description", "");
    const auto pos = get_field<std::vector<double>>(a, "position", ctx);
    if (pos.size() != 3) throw ParseError(ctx + ": position must be [x, y, z]");
    art.position = {pos[0], pos[1], pos[2]};
    art.facing = get_vec2(get_field<json>(a, "facing", ctx), ctx + " facing");
    art.popularity = a.value("popularity", 0.0);
    const auto visits = a.value("visit_count", 0.0);
    if (visits < 0) throw ValidationError(art.id, "visit_count must be non-negative");
    art.visit_count = static_cast<std::uint64_t>(visits);

    for (const auto& r : a.value("regions", json::array())) {
        Region reg;
        reg.name = get_field<std::string>(r, "name", ctx + " region");
        const auto rect = get_field<std::vector<double>>(r, "rect", ctx + " region '" + reg.name + "'");
        if (rect.size() != 4) throw ParseError(ctx + " region '" + reg.name + "': rect must be [x, y, w, h]");
        std::copy(rect.begin(), rect.end(), reg.rect.begin());
        reg.note = r.value("note", "");
        art.regions.push_back(std::move(reg));
    }
    return art;
}

void validate_artwork(const Artwork& art, const Bounds& bounds, const std::vector<Polygon>& obstacles)
{
    if (art.id.empty()) throw ValidationError("<artwork>", "empty id");
    if (std::abs(art.facing.norm() - 1.0) > 1e-6) throw ValidationError(art.id, "facing is not a unit vector");
    if (art.popularity < 0.0) throw ValidationError(art.id, "popularity must be non-negative");
    if (!bounds.contains(art.position.floor())) throw ValidationError(art.id, "position outside museum bounds");
    for (std::size_t i = 0; i < obstacles.size(); ++i)
        if (point_in_polygon(art.position.floor(), obstacles[i]))
            throw ValidationError(art.id, fmt::format("position inside obstacle {}", i));

    std::set<std::string> names;
    for (const auto& r : art.regions) {
        const auto [x, y, w, h] = r.rect;
        if (x < 0 || y < 0 || w < 0 || h < 0 || x + w > 1.0 + 1e-9 || y + h > 1.0 + 1e-9)
            throw ValidationError(art.id, "region '" + r.name + "' rect outside the image");
        if (!names.insert(text::normalize(r.name)).second)
            throw ValidationError(art.id, "duplicate region '" + r.name + "'");
    }
}

std::optional<Cell> find_viewing_cell(const Artwork& art, const OccupancyGrid& grid,
                                      const std::vector<Polygon>& obstacles,
                                      const std::vector<Artwork>& artworks)
{
    const Vec2 p = art.position.floor();
    const Vec2 ideal = p + art.facing * kViewingDistance;
    const Vec2 face = p + art.facing * 0.05;
    const int reach = static_cast<int>(std::ceil(kViewingRange / grid.resolution())) + 1;
    const Cell pc = grid.cell_of(p);

    std::optional<Cell> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (int r = pc.row - reach; r <= pc.row + reach; ++r) {
        for (int c = pc.col - reach; c <= pc.col + reach; ++c) {
            const Cell cell{c, r};
            if (!grid.traversable(cell)) continue;
            const Vec2 center = grid.center(cell);
            if (distance(center, p) > kViewingRange) continue;
            if ((center - p).dot(art.facing) <= 0.0) continue;

            bool visible = true;
            for (const auto& poly : obstacles)
                if (segment_hits_polygon(center, face, poly)) { visible = false; break; }
            for (const auto& other : artworks) {
                if (!visible || &other == &art) continue;
                auto s = wall_segment(other);
                if (segments_intersect(center, face, s.a, s.b)) visible = false;
            }
            if (!visible) continue;

            // Row-major scan order makes ties resolve to the lowest (row, col).
            const double d = distance(center, ideal);
            if (d < best_d - 1e-12) {
                best_d = d;
                best = cell;
            }
        }
    }
    return best;
}

std::vector<bool> flood_fill(const OccupancyGrid& grid, Cell start)
{
    std::vector<bool> seen(static_cast<std::size_t>(grid.width()) * grid.height(), false);
    std::deque<Cell> queue{start};
    seen[grid.index(start)] = true;
    while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if ((dc || dr) && grid.can_step(c, dc, dr)) {
                    Cell n{c.col + dc, c.row + dr};
                    if (!seen[grid.index(n)]) {
                        seen[grid.index(n)] = true;
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    return seen;
}

}  // namespace

// ---------------------------------------------------------------------------
// MuseumWorld

MuseumWorld MuseumWorld::from_json(const json& doc)
{
    if (!doc.is_object()) throw ParseError("museum document must be a JSON object");
    if (doc.value("schema", 0) != 1) throw ParseError("unsupported or missing museum schema version");

    MuseumWorld world;
    const auto& b = get_field<json>(doc, "bounds", "museum");
    world.bounds_.w = get_field<double>(b, "w", "bounds");
    world.bounds_.h = get_field<double>(b, "h", "bounds");
    world.bounds_.x0 = b.value("x", 0.0);
    world.bounds_.y0 = b.value("y", 0.0);
    if (world.bounds_.w <= 0 || world.bounds_.h <= 0) throw ValidationError("bounds", "width and height must be positive");

    world.spawn_ = get_vec2(get_field<json>(doc, "spawn", "museum"), "spawn");
    if (!world.bounds_.contains(world.spawn_)) throw ValidationError("spawn", "outside museum bounds");

    const auto obstacles = doc.value("obstacles", json::array());
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        Polygon poly;
        for (const auto& v : obstacles[i]) poly.push_back(get_vec2(v, fmt::format("obstacles[{}]", i)));
        if (poly.size() < 3) throw ValidationError(fmt::format("obstacle {}", i), "polygon needs at least 3 vertices");
        world.obstacles_.push_back(std::move(poly));
    }

    const auto artworks = get_field<json>(doc, "artworks", "museum");
    if (!artworks.is_array()) throw ParseError("museum: 'artworks' must be a list");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < artworks.size(); ++i) {
        auto art = parse_artwork(artworks[i], i);
        validate_artwork(art, world.bounds_, world.obstacles_);
        if (!ids.insert(art.id).second) throw ValidationError(art.id, "duplicate artwork id");
        world.artworks_.push_back(std::move(art));
    }
    for (const auto& art : world.artworks_) world.normalized_names_.push_back(text::normalize(art.name));

    world.grid_ = build_grid(world.bounds_, world.obstacles_, world.artworks_);

    const Cell spawn_cell = world.grid_.cell_of(world.spawn_);
    if (!world.grid_.traversable(spawn_cell)) throw ValidationError("spawn", "spawn cell is blocked");
    const auto reached = flood_fill(world.grid_, spawn_cell);

    for (const auto& art : world.artworks_) {
        auto cell = find_viewing_cell(art, world.grid_, world.obstacles_, world.artworks_);
        if (!cell) throw ValidationError(art.id, "no traversable viewing cell within 2 m");
        if (!reached[world.grid_.index(*cell)]) throw ValidationError(art.id, "unreachable from spawn");
        world.viewing_cells_.push_back(*cell);
    }
    return world;
}

Cell MuseumWorld::viewing_cell(const Artwork& a) const
{
    auto idx = index_of(a.id);
    if (!idx) throw UnknownArtwork(a.id);
    return viewing_cells_[*idx];
}

std::optional<std::size_t> MuseumWorld::index_of(std::string_view id) const
{
    for (std::size_t i = 0; i < artworks_.size(); ++i)
        if (artworks_[i].id == id) return i;
    return std::nullopt;
}

const Artwork* MuseumWorld::find_artwork(std::string_view query) const
{
    if (auto idx = index_of(query)) return &artworks_[*idx];

    const auto wanted = text::normalize(query);
    if (wanted.empty()) return nullptr;
    const Artwork* best = nullptr;
    for (std::size_t i = 0; i < artworks_.size(); ++i) {
        // Normalized ids match too ("Painting 007", "painting_007").
        if (normalized_names_[i] != wanted && text::normalize(artworks_[i].id) != wanted) continue;
        if (!best || artworks_[i].id < best->id) best = &artworks_[i];
    }
    return best;
}

std::vector<const Artwork*> MuseumWorld::artworks_by_filter(const ArtworkFilter& filter) const
{
    if (filter.limit < 1) throw PreconditionError("artworks_by_filter: limit must be at least 1");

    std::optional<std::string> style, author;
    if (filter.style) style = text::normalize(*filter.style);
    if (filter.author) author = text::normalize(*filter.author);

    std::vector<const Artwork*> out;
    for (const auto& art : artworks_) {
        if (style && text::normalize(art.style) != *style) continue;
        if (author && text::normalize(art.author) != *author) continue;
        out.push_back(&art);
    }

    std::stable_sort(out.begin(), out.end(), [](const Artwork* a, const Artwork* b) { return a->id < b->id; });
    switch (filter.sort_by) {
    case SortKey::Popularity:
        std::stable_sort(out.begin(), out.end(),
                         [](const Artwork* a, const Artwork* b) { return a->popularity > b->popularity; });
        break;
    case SortKey::Distance:
        std::stable_sort(out.begin(), out.end(), [&](const Artwork* a, const Artwork* b) {
            return distance(a->position.floor(), filter.from) < distance(b->position.floor(), filter.from);
        });
        break;
    case SortKey::Id:
        break;
    }
    if (out.size() > filter.limit) out.resize(filter.limit);
    return out;
}

std::vector<const Artwork*> MuseumWorld::mentioned_in(std::string_view raw) const
{
    const auto haystack = text::normalize(raw);
    std::vector<std::pair<std::size_t, const Artwork*>> hits;
    for (std::size_t i = 0; i < artworks_.size(); ++i) {
        auto pos = text::find_word(haystack, normalized_names_[i]);
        auto id_pos = text::find_word(haystack, text::normalize(artworks_[i].id));
        // "The Last Supper" is often written without its article.
        if (pos == std::string::npos && normalized_names_[i].rfind("the ", 0) == 0)
            pos = text::find_word(haystack, std::string_view(normalized_names_[i]).substr(4));
        auto first = std::min(pos, id_pos);
        if (first != std::string::npos) hits.emplace_back(first, &artworks_[i]);
    }
    std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<const Artwork*> out;
    for (const auto& [pos, art] : hits) out.push_back(art);
    return out;
}

json MuseumWorld::to_json() const
{
    json doc;
    doc["schema"] = 1;
    doc["bounds"] = {{"x", bounds_.x0}, {"y", bounds_.y0}, {"w", bounds_.w}, {"h", bounds_.h}};
    doc["spawn"] = {spawn_.x, spawn_.y};
    doc["obstacles"] = json::array();
    for (const auto& poly : obstacles_) {
        json p = json::array();
        for (auto v : poly) p.push_back({v.x, v.y});
        doc["obstacles"].push_back(std::move(p));
    }
    doc["artworks"] = json::array();
    for (std::size_t i = 0; i < artworks_.size(); ++i) {
        const auto& a = artworks_[i];
        json regions = json::array();
        for (const auto& r : a.regions)
            regions.push_back({{"name", r.name}, {"rect", r.rect}, {"note", r.note}});
        const Vec2 view = grid_.center(viewing_cells_[i]);
        doc["artworks"].push_back({
            {"id", a.id},
            {"name", a.name},
            {"author", a.author},
            {"year", a.year},
            {"style", a.style},
            {"description", a.description},
            {"position", {a.position.x, a.position.y, a.position.z}},
            {"facing", {a.facing.x, a.facing.y}},
            {"popularity", a.popularity},
            {"visit_count", a.visit_count},
            {"regions", std::move(regions)},
            {"viewing", {view.x, view.y}},
        });
    }
    doc["grid"] = {{"resolution", grid_.resolution()}, {"width", grid_.width()}, {"height", grid_.height()}};
    return doc;
}

MuseumWorld load_museum(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read museum file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return MuseumWorld::from_json(doc);
}

// ---------------------------------------------------------------------------
// VisitStats

VisitStats::VisitStats(const MuseumWorld& world)
    : counts_(std::make_unique<std::atomic<std::uint64_t>[]>(world.artworks().size())),
      size_(world.artworks().size())
{
    for (std::size_t i = 0; i < size_; ++i) counts_[i].store(world.artworks()[i].visit_count);
}

void VisitStats::record_visit(std::size_t artwork_index)
{
    if (artwork_index >= size_) throw PreconditionError("record_visit: artwork index out of range");
    counts_[artwork_index].fetch_add(1, std::memory_order_relaxed);
}

std::uint64_t VisitStats::count(std::size_t artwork_index) const
{
    if (artwork_index >= size_) throw PreconditionError("count: artwork index out of range");
    return counts_[artwork_index].load(std::memory_order_relaxed);
}

}  // namespace wander

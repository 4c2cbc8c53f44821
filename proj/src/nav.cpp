#include "wander/nav.hpp"

#include "wander/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace wander {

namespace {

double octile(Cell a, Cell b, double res)
{
    const int dx = std::abs(a.col - b.col);
    const int dy = std::abs(a.row - b.row);
    return res * (std::max(dx, dy) + (std::numbers::sqrt2 - 1.0) * std::min(dx, dy));
}

}  // namespace

std::optional<GridRoute> shortest_route(const OccupancyGrid& grid, Cell start, Cell goal)
{
    if (!grid.traversable(start) || !grid.traversable(goal)) return std::nullopt;

    const double res = grid.resolution();
    const std::size_t n = static_cast<std::size_t>(grid.width()) * grid.height();
    std::vector<double> g(n, std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> parent(n, -1);
    std::vector<bool> closed(n, false);

    struct Open {
        double f;
        double h;
        std::size_t idx;
        bool operator>(const Open& o) const { return f != o.f ? f > o.f : (h != o.h ? h > o.h : idx > o.idx); }
    };
    std::priority_queue<Open, std::vector<Open>, std::greater<>> open;

    const auto si = grid.index(start);
    g[si] = 0.0;
    open.push({octile(start, goal, res), octile(start, goal, res), si});

    const auto gi = grid.index(goal);
    while (!open.empty()) {
        const auto top = open.top();
        open.pop();
        if (closed[top.idx]) continue;
        closed[top.idx] = true;
        if (top.idx == gi) break;

        const Cell cur{static_cast<int>(top.idx % grid.width()), static_cast<int>(top.idx / grid.width())};
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if ((dc == 0 && dr == 0) || !grid.can_step(cur, dc, dr)) continue;
                const Cell next{cur.col + dc, cur.row + dr};
                const auto ni = grid.index(next);
                if (closed[ni]) continue;
                const double cand = g[top.idx] + (dc != 0 && dr != 0 ? res * std::numbers::sqrt2 : res);
                if (cand < g[ni]) {
                    g[ni] = cand;
                    parent[ni] = static_cast<std::int64_t>(top.idx);
                    const double h = octile(next, goal, res);
                    open.push({cand + h, h, ni});
                }
            }
        }
    }
    if (!closed[gi]) return std::nullopt;

    GridRoute route;
    route.length = g[gi];
    for (std::int64_t i = static_cast<std::int64_t>(gi); i != -1; i = parent[i])
        route.cells.push_back({static_cast<int>(i % grid.width()), static_cast<int>(i / grid.width())});
    std::reverse(route.cells.begin(), route.cells.end());
    return route;
}

std::vector<Vec2> string_pull(const OccupancyGrid& grid, const std::vector<Vec2>& points)
{
    if (points.size() <= 2) return points;
    std::vector<Vec2> kept{points.front()};
    for (std::size_t k = 1; k + 1 < points.size(); ++k) {
        if (!grid.segment_clear(kept.back(), points[k + 1])) kept.push_back(points[k]);
    }
    kept.push_back(points.back());
    return kept;
}

double polyline_length(const std::vector<Vec2>& points)
{
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) total += distance(points[i - 1], points[i]);
    return total;
}

Vec2 point_along(const std::vector<Vec2>& points, double s)
{
    if (points.empty()) throw PreconditionError("point_along: empty polyline");
    if (s <= 0.0) return points.front();
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double seg = distance(points[i - 1], points[i]);
        if (s <= seg && seg > 0.0) return points[i - 1] + (points[i] - points[i - 1]) * (s / seg);
        s -= seg;
    }
    return points.back();
}

Path plan_path_to_cell(const OccupancyGrid& grid, Vec2 from, Cell goal, const std::string& label)
{
    const Cell start = grid.cell_of(from);
    if (!grid.traversable(start)) throw PreconditionError("plan_path: start is not on a traversable cell");

    auto route = shortest_route(grid, start, goal);
    if (!route) throw Unreachable(label);

    Path path;
    path.cells = route->cells;
    path.grid_length = route->length;
    if (route->cells.size() == 1) {
        path.waypoints = {from};
        return path;
    }
    std::vector<Vec2> raw{from};
    for (const auto& c : route->cells) raw.push_back(grid.center(c));
    path.waypoints = string_pull(grid, raw);
    path.length = polyline_length(path.waypoints);
    return path;
}

Path plan_path(const MuseumWorld& world, Vec2 from, const Artwork& to)
{
    if (!world.bounds().contains(from)) throw PreconditionError("plan_path: start outside the museum");
    return plan_path_to_cell(world.grid(), from, world.viewing_cell(to), to.id);
}

bool advance(Session& session, WalkProgress& progress, double dt, double speed)
{
    if (!(dt > 0.0)) throw PreconditionError("advance: dt must be positive");
    if (!(speed > 0.0)) throw PreconditionError("advance: speed must be positive");
    if (session.path.empty()) throw PreconditionError("advance: session has no active path");

    const auto& path = session.path;
    const double total = polyline_length(path);
    const double step = speed * dt;

    progress.guide_s = std::min(total, progress.guide_s + step);
    const double target = std::max(0.0, progress.guide_s - kFollowDistance);
    if (progress.visitor_s < target) progress.visitor_s = std::min(target, progress.visitor_s + step);

    session.guide_pos = point_along(path, progress.guide_s);
    session.visitor_pos = point_along(path, progress.visitor_s);

    return progress.guide_s >= total && distance(session.visitor_pos, path.back()) <= kArrivalRadius;
}

SignpostState signpost(Vec2 visitor, Vec2 dest)
{
    const double dx = dest.x - visitor.x;
    const double dy = dest.y - visitor.y;
    if (dx == 0.0 && dy == 0.0) throw DegenerateDirection();
    double bearing = std::atan2(dx, dy);
    if (bearing <= -std::numbers::pi) bearing = std::numbers::pi;
    return {bearing, std::hypot(dx, dy)};
}

MinimapState minimap(const MuseumWorld& world, const Session& session, const MinimapState& previous)
{
    const auto& b = world.bounds();
    MinimapState m;
    m.visible = session.walking;
    m.marker = {std::clamp((session.visitor_pos.x - b.x0) / b.w, 0.0, 1.0),
                std::clamp((session.visitor_pos.y - b.y0) / b.h, 0.0, 1.0)};
    if (m.visible) {
        m.trail = previous.trail;
        m.trail.push_back(m.marker);
        if (m.trail.size() > kTrailLimit) m.trail.erase(m.trail.begin(), m.trail.end() - kTrailLimit);
    }
    return m;
}

nlohmann::json to_json(const SignpostState& s)
{
    return {{"bearing", s.bearing}, {"distance", s.distance}};
}

nlohmann::json to_json(const MinimapState& m)
{
    auto trail = nlohmann::json::array();
    for (const auto& p : m.trail) trail.push_back({p[0], p[1]});
    return {{"visible", m.visible}, {"marker", {m.marker[0], m.marker[1]}}, {"trail", trail}};
}

}  // namespace wander

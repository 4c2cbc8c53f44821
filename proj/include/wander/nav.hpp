#pragma once

#include "wander/geometry.hpp"
#include "wander/session.hpp"
#include "wander/world.hpp"

#include <array>
#include <optional>
#include <vector>

namespace wander {

inline constexpr double kDefaultSpeed = 1.2;      // m/s
inline constexpr double kFollowDistance = 1.0;    // visitor trails the guide by this much
inline constexpr double kArrivalRadius = 1.5;     // visitor distance to the goal that counts as arrived
inline constexpr std::size_t kTrailLimit = 200;

// Optimal 8-connected cell sequence, start and goal included.
struct GridRoute {
    std::vector<Cell> cells;
    double length = 0.0;  // meters
};

// A* with an octile heuristic; straight steps cost one resolution, diagonals
// sqrt(2). Diagonals never cut a blocked corner. nullopt when no route exists.
std::optional<GridRoute> shortest_route(const OccupancyGrid& grid, Cell start, Cell goal);

struct Path {
    std::vector<Vec2> waypoints;  // smoothed; first = start point, last = goal cell center
    double length = 0.0;          // sum of smoothed segment lengths
    std::vector<Cell> cells;      // raw route the waypoints were pulled from
    double grid_length = 0.0;     // optimal grid length of `cells`
};

// Drops waypoint k whenever the last kept point sees waypoint k+1 across
// traversable cells only.
std::vector<Vec2> string_pull(const OccupancyGrid& grid, const std::vector<Vec2>& points);

double polyline_length(const std::vector<Vec2>& points);

// Point at arc length s along a polyline, clamped to its ends.
Vec2 point_along(const std::vector<Vec2>& points, double s);

// Throws PreconditionError when `from` is off the grid or on a blocked cell,
// Unreachable(label) when the goal cannot be reached.
Path plan_path_to_cell(const OccupancyGrid& grid, Vec2 from, Cell goal, const std::string& label);

// Path from `from` to the artwork's viewing cell.
Path plan_path(const MuseumWorld& world, Vec2 from, const Artwork& to);

// Arc-length progress of both avatars along the session's active path.
struct WalkProgress {
    double guide_s = 0.0;
    double visitor_s = 0.0;
};

// One kinematics step along session.path. Updates guide_pos and visitor_pos;
// returns true on arrival. Throws PreconditionError for dt <= 0 or speed <= 0.
bool advance(Session& session, WalkProgress& progress, double dt, double speed = kDefaultSpeed);

struct SignpostState {
    double bearing = 0.0;   // radians in (-pi, pi], clockwise from +y
    double distance = 0.0;  // meters
};

// Throws DegenerateDirection when the points coincide.
SignpostState signpost(Vec2 visitor, Vec2 dest);

struct MinimapState {
    bool visible = false;
    std::array<double, 2> marker{};
    std::vector<std::array<double, 2>> trail;
};

// Visible only while walking. The trail grows while visible and is cleared
// once the map hides.
MinimapState minimap(const MuseumWorld& world, const Session& session, const MinimapState& previous = {});

nlohmann::json to_json(const SignpostState& s);
nlohmann::json to_json(const MinimapState& m);

}  // namespace wander

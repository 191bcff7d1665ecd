#include "chemodg/structured.hpp"

#include <cmath>
#include <vector>

namespace chemodg {

std::shared_ptr<const Mesh> rectangle_mesh(int nx, int ny,
                                           double x0, double y0,
                                           double x1, double y1) {
    if (nx < 1 || ny < 1) throw Error("rectangle_mesh: need nx, ny >= 1");
    std::vector<Vec3> verts;
    verts.reserve((nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            verts.push_back({x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny, 0.0});
    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
    std::vector<std::array<int, 4>> elems;
    elems.reserve(2 * nx * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
            elems.push_back({a, b, c, -1});
            elems.push_back({a, c, d, -1});
        }
    return build_mesh(2, verts, elems);
}

std::shared_ptr<const Mesh> crisscross_mesh(int nx, int ny,
                                            double x0, double y0,
                                            double x1, double y1) {
    if (nx < 1 || ny < 1) throw Error("crisscross_mesh: need nx, ny >= 1");
    std::vector<Vec3> verts;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            verts.push_back({x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny, 0.0});
    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
    const int grid_count = (nx + 1) * (ny + 1);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            verts.push_back({x0 + (x1 - x0) * (i + 0.5) / nx, y0 + (y1 - y0) * (j + 0.5) / ny, 0.0});
    std::vector<std::array<int, 4>> elems;
    elems.reserve(4 * nx * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
            int m = grid_count + j * nx + i;
            elems.push_back({a, b, m, -1});
            elems.push_back({b, c, m, -1});
            elems.push_back({c, d, m, -1});
            elems.push_back({d, a, m, -1});
        }
    return build_mesh(2, verts, elems);
}

std::shared_ptr<const Mesh> generate_disk_mesh(double radius, double target_h) {
    if (!(radius > 0.0) || !(target_h > 0.0))
        throw Error("generate_disk_mesh: radius and target_h must be positive");
    // The longest edges are the band diagonals, about 1.45 ring spacings, so
    // rings are spaced at 0.75 target_h to land the mesh size near target_h.
    int rings = static_cast<int>(std::ceil(radius / (0.75 * target_h) - 1e-9));
    if (rings < 1) rings = 1;
    if (6 * rings < 8)
        throw Error("generate_disk_mesh: target_h too large, fewer than 8 boundary segments");

    std::vector<Vec3> verts;
    verts.push_back({0.0, 0.0, 0.0});
    std::vector<int> ring_start(rings + 1, 0);  // ring_start[i] = index of first vertex on ring i
    for (int i = 1; i <= rings; ++i) {
        ring_start[i] = static_cast<int>(verts.size());
        int count = 6 * i;
        double r = radius * i / rings;
        for (int j = 0; j < count; ++j) {
            double theta = 2.0 * M_PI * j / count;
            verts.push_back({r * std::cos(theta), r * std::sin(theta), 0.0});
        }
    }

    std::vector<std::array<int, 4>> elems;
    // Innermost hexagon fan around the center.
    for (int j = 0; j < 6; ++j)
        elems.push_back({0, ring_start[1] + j, ring_start[1] + (j + 1) % 6, -1});
    // Bands between consecutive rings: greedy frontier advance, choosing at
    // each step the candidate triangle with the shorter new edge (the
    // Delaunay-like diagonal of the local quad).
    for (int i = 2; i <= rings; ++i) {
        int na = 6 * (i - 1), nb = 6 * i;
        int sa = ring_start[i - 1], sb = ring_start[i];
        int ia = 0, ib = 0;
        auto dist2 = [&verts](int u, int v) {
            Vec3 d = verts[u] - verts[v];
            return dot(d, d);
        };
        while (ia < na || ib < nb) {
            int a_cur = sa + (ia % na);
            int b_cur = sb + (ib % nb);
            int a_next = sa + ((ia + 1) % na);
            int b_next = sb + ((ib + 1) % nb);
            bool advance_b;
            if (ia == na) {
                advance_b = true;
            } else if (ib == nb) {
                advance_b = false;
            } else {
                advance_b = dist2(a_cur, b_next) <= dist2(b_cur, a_next);
            }
            if (advance_b) {
                elems.push_back({a_cur, b_cur, b_next, -1});
                ++ib;
            } else {
                elems.push_back({a_cur, b_cur, a_next, -1});
                ++ia;
            }
        }
    }
    return build_mesh(2, verts, elems);
}

std::shared_ptr<const Mesh> generate_ball_mesh(double radius, double target_h) {
    if (!(radius > 0.0) || !(target_h > 0.0))
        throw Error("generate_ball_mesh: radius and target_h must be positive");
    // Cube grid over [-1,1]^3, each cell split into 6 tetrahedra along the
    // main diagonal, then mapped radially onto the ball.
    int n = static_cast<int>(std::ceil(2.0 * radius / (1.2 * target_h)));
    if (n < 2) n = 2;
    const int np = n + 1;
    std::vector<Vec3> verts;
    verts.reserve(np * np * np);
    for (int k = 0; k <= n; ++k)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                Vec3 p{-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n, -1.0 + 2.0 * k / n};
                double linf = std::max({std::abs(p.x), std::abs(p.y), std::abs(p.z)});
                double l2 = norm(p);
                verts.push_back(l2 > 0.0 ? (radius * linf / l2) * p : Vec3{0.0, 0.0, 0.0});
            }
    auto vid = [np](int i, int j, int k) { return (k * np + j) * np + i; };
    std::vector<std::array<int, 4>> elems;
    elems.reserve(6 * n * n * n);
    // Kuhn split of each cube: six tets sharing the diagonal (0,0,0)-(1,1,1).
    static const int tets[6][4][3] = {
        {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}},
        {{0, 0, 0}, {1, 1, 0}, {0, 1, 0}, {1, 1, 1}},
        {{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {1, 1, 1}},
        {{0, 0, 0}, {0, 1, 1}, {0, 0, 1}, {1, 1, 1}},
        {{0, 0, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}},
        {{0, 0, 0}, {1, 0, 1}, {1, 0, 0}, {1, 1, 1}},
    };
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                for (const auto& t : tets) {
                    std::array<int, 4> el;
                    for (int v = 0; v < 4; ++v)
                        el[v] = vid(i + t[v][0], j + t[v][1], k + t[v][2]);
                    elems.push_back(el);
                }
    return build_mesh(3, verts, elems);
}

}  // namespace chemodg

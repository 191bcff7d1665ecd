#ifndef CHEMODG_STRUCTURED_HPP
#define CHEMODG_STRUCTURED_HPP

#include <memory>

#include "chemodg/mesh.hpp"

namespace chemodg {

// [x0,x1] x [y0,y1] split into nx*ny squares, each cut by one diagonal.
std::shared_ptr<const Mesh> rectangle_mesh(int nx, int ny,
                                           double x0 = 0.0, double y0 = 0.0,
                                           double x1 = 1.0, double y1 = 1.0);

// Same grid, each square cut into four triangles through its center.
std::shared_ptr<const Mesh> crisscross_mesh(int nx, int ny,
                                            double x0 = 0.0, double y0 = 0.0,
                                            double x1 = 1.0, double y1 = 1.0);

// Disk of given radius meshed by concentric rings of near-equilateral
// triangles; ring i carries 6*i vertices and all boundary vertices lie on
// the circle. Throws Error when target_h is too coarse to give at least 8
// boundary segments.
std::shared_ptr<const Mesh> generate_disk_mesh(double radius, double target_h);

// Ball of given radius: structured tetrahedral grid of the cube mapped
// radially onto the ball. Boundary vertices land on the sphere exactly.
std::shared_ptr<const Mesh> generate_ball_mesh(double radius, double target_h);

}  // namespace chemodg

#endif

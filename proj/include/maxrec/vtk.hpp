// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXREC_VTK_HPP
#define MAXREC_VTK_HPP

#include <filesystem>
#include <string>

#include "maxrec/grid.hpp"

namespace maxrec {

// Legacy VTK STRUCTURED_POINTS, ASCII, one VECTORS attribute, point data in
// x-fastest order.
void write_vtk(const VectorGrid& field, const std::string& field_name,
               const std::filesystem::path& path);

} // namespace maxrec

#endif

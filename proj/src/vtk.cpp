// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0

#include "maxrec/vtk.hpp"

#include <cstdio>
#include <fstream>

namespace maxrec {

void write_vtk(const VectorGrid& field, const std::string& field_name,
               const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("write_vtk: cannot open '" + path.string() + "' for writing");

    const Grid3& g = field.grid;
    out << "# vtk DataFile Version 3.0\n";
    out << field_name << "\n";
    out << "ASCII\n";
    out << "DATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << g.n[0] << ' ' << g.n[1] << ' ' << g.n[2] << "\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "ORIGIN %.17g %.17g %.17g\n", g.lo[0], g.lo[1], g.lo[2]);
    out << buf;
    std::snprintf(buf, sizeof buf, "SPACING %.17g %.17g %.17g\n", g.h[0], g.h[1], g.h[2]);
    out << buf;
    out << "POINT_DATA " << g.size() << "\n";
    out << "VECTORS " << field_name << " double\n";
    for (int k = 0; k < g.n[2]; ++k)
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i) {
                const auto p = g.index(i, j, k);
                std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", field.comp[0][p],
                              field.comp[1][p], field.comp[2][p]);
                out << buf;
            }
    if (!out)
        throw IoError("write_vtk: write failed for '" + path.string() + "'");
}

} // namespace maxrec

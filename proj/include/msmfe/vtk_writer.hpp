#pragma once

#include <iosfwd>
#include <string>

#include "msmfe/assembly.hpp"
#include "msmfe/solver.hpp"

namespace msmfe {

/// Legacy ASCII VTK unstructured grid (VTK_QUAD cells).
///
/// Cell data: displacement, stress rows at the cell center, and the rotation for MSMFE-0.
/// Point data: stress rows averaged over the cells sharing a vertex, and the rotation for
/// MSMFE-1.
void write_vtk(std::ostream& out, const QuadMesh& mesh, const DofMap& dofs, const SolutionFields& fields,
               const std::string& title = "msmfe solution");

void write_vtk_file(const std::string& path, const QuadMesh& mesh, const DofMap& dofs,
                    const SolutionFields& fields);

}  // namespace msmfe

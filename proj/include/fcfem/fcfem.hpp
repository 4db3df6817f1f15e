/*! @file
//  Convenience header pulling in the whole library.
*/
#pragma once

#include <fcfem/geometry.hpp>
#include <fcfem/quadrature.hpp>
#include <fcfem/element.hpp>
#include <fcfem/mesh.hpp>
#include <fcfem/assembly.hpp>
#include <fcfem/solver.hpp>
#include <fcfem/flux.hpp>
#include <fcfem/bubbles.hpp>
#include <fcfem/study.hpp>

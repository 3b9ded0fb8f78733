#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vtl/coeff.hpp"
#include "vtl/exponent.hpp"
#include "vtl/phi_system.hpp"

namespace vtl {

// All readers throw InputError on malformed input or a grid that does not
// match the expected one (n, J, L).

/// `exponent n=<dim> J=<box> L=<level>` then row-major cell values ("inf" allowed).
/// The field is classified on load.
ExponentField read_exponent(std::istream& is, const Grid& grid);
void write_exponent(std::ostream& os, const ExponentField& p);

/// A preset (`const:2`, `sin:...`, `step:...`, `inf`) or the path of an exponent file.
ExponentField load_exponent(const Grid& grid, const std::string& preset_or_path);

/// `gridfn n J L real|complex [binary]` then row-major values, pairs for
/// complex.  With `binary` the values follow the header line as
/// little-endian 64-bit floats.
GridFunction read_gridfn(std::istream& is, const Grid& grid);
void write_gridfn(std::ostream& os, const GridFunction& f, bool binary = false);

/// `fnseq count v_start` then `count` gridfn blocks.
FunctionSequence read_fnseq(std::istream& is, const Grid& grid);
void write_fnseq(std::ostream& os, const FunctionSequence& fs);

/// Lines `v m1 [m2] re [im]`; missing entries are zero; `#` starts a comment.
CoeffSequence read_coefficients(std::istream& is, const Grid& grid);
/// Nonzero entries only.
void write_coefficients(std::ostream& os, const CoeffSequence& lambda);

/// Lines `v m1 [m2]`.
std::vector<DyadicCube> read_cubes(std::istream& is, int n);

/// `phisys n J L V_max`, rows `Phi`, `phi`, `Psi`, `psi` of DFT-grid values,
/// then the certificate as key=value lines.
void write_phisys(std::ostream& os, const PhiSystem& sys);
void write_certificate(std::ostream& os, const PhiCertificate& c);

GridFunction load_gridfn(const std::string& path, const Grid& grid);
FunctionSequence load_fnseq(const std::string& path, const Grid& grid);
CoeffSequence load_coefficients(const std::string& path, const Grid& grid);

}  // namespace vtl

#pragma once

#include <map>
#include <string>
#include <vector>

#include "panharmonic/fields.hpp"
#include "panharmonic/geometry.hpp"

namespace panharmonic {

/// A parsed "name:key=v,v,...,key=v" spec. A comma-separated token without
/// '=' continues the value list of the preceding key.
struct Spec {
  std::string name;
  std::map<std::string, std::vector<double>> params;

  static Spec parse(const std::string& text);
};

/// Field specs, m from --dim (vectors must have m entries):
///   plane:mu=M[,dir=d1,...]     e^{mu <d,x>}, d normalized (default e1)
///   cosh:mu=M[,dir=...]         cosh(mu <d,x>)
///   radial:mu=M[,center=...]    a°(mu |x - c|)
///   const[:value=V]             V (default 1)
///   linear:coef=...[,offset=B]  B + <coef, x>
///   product[:i=I,j=J]           x_I x_J (1-based, default 1,2)
///   difference[:i=I,j=J]        x_I^2 - x_J^2
///   fundamental:pole=...        E_m(x - pole)
/// Every field accepts scale=S (multiplies the field) and shift=C (adds C;
/// the label survives only if it is still true, i.e. C = 0 or a harmonic field).
ScalarField parse_field(const std::string& text, int m);

/// ball[:r=R,c=...] (default unit ball at the origin) or box[:lo=...,hi=...]
/// (default unit box [0,1]^m).
Domain parse_domain(const std::string& text, int m);

/// "a:b:n" (n equispaced values from a to b inclusive) or "v1,v2,...".
std::vector<double> parse_grid(const std::string& text);

/// "x1,...,xm;x1,...,xm;..." points of dimension m.
std::vector<Point> parse_points(const std::string& text, int m);

}  // namespace panharmonic

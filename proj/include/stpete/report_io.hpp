#ifndef STPETE_REPORT_IO_HPP
#define STPETE_REPORT_IO_HPP

#include <iosfwd>
#include <string>

#include "stpete/rate_study.hpp"

namespace stpete {

std::string kind_name(ErrorKind k);
std::string mode_name(ApproxMode m);

/// CSV with header n,gamma_n,delta,normalized,cert; 17 significant digits,
/// LF line endings.
void write_rate_csv(std::ostream& os, const RateReport& rep);

/// JSON report {params, ell, kind, rows:[...], summary:{...}}.
void write_rate_json(std::ostream& os, const RateReport& rep);

} // namespace stpete

#endif

#ifndef PSATZ_PSATZ_HPP
#define PSATZ_PSATZ_HPP

#include "psatz/certifiers.hpp"
#include "psatz/conic.hpp"
#include "psatz/driver.hpp"
#include "psatz/ipm.hpp"
#include "psatz/json_io.hpp"
#include "psatz/oracle.hpp"
#include "psatz/polynomial.hpp"
#include "psatz/pop.hpp"
#include "psatz/rational.hpp"
#include "psatz/reduction.hpp"
#include "psatz/serialize.hpp"

#endif

#pragma once

// Single include for the whole library.

#include "fibrate/linalg.hpp"
#include "fibrate/plane.hpp"
#include "fibrate/bivector.hpp"
#include "fibrate/grassmann.hpp"
#include "fibrate/complex_structure.hpp"
#include "fibrate/fibration.hpp"
#include "fibrate/quaternionic.hpp"
#include "fibrate/report.hpp"
#include "fibrate/json_io.hpp"
#include "fibrate/suites.hpp"

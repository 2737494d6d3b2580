#pragma once

#include "rgroups/certificate.hpp"
#include "rgroups/diagrams.hpp"
#include "rgroups/distribution.hpp"
#include "rgroups/errors.hpp"
#include "rgroups/expression.hpp"
#include "rgroups/pigeonhole.hpp"
#include "rgroups/random.hpp"
#include "rgroups/rational.hpp"
#include "rgroups/serialize.hpp"
#include "rgroups/thresholds.hpp"
#include "rgroups/trivializer.hpp"
#include "rgroups/words.hpp"

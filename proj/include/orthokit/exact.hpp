#pragma once

#include "orthokit/exact/errors.hpp"
#include "orthokit/exact/matrix.hpp"
#include "orthokit/exact/rational.hpp"
#include "orthokit/exact/ring.hpp"

#pragma once

#include "orthokit/global/isotropy.hpp"
#include "orthokit/global/place.hpp"
#include "orthokit/global/quadric.hpp"
#include "orthokit/global/sap.hpp"

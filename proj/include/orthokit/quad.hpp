#pragma once

#include "orthokit/quad/form.hpp"
#include "orthokit/quad/normalize.hpp"
#include "orthokit/quad/reflection.hpp"
#include "orthokit/quad/special.hpp"
#include "orthokit/quad/spinor.hpp"
#include "orthokit/quad/witt.hpp"

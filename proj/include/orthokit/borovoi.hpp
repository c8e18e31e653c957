#pragma once

#include "orthokit/borovoi/fiber.hpp"
#include "orthokit/borovoi/frame.hpp"
#include "orthokit/borovoi/local.hpp"
#include "orthokit/borovoi/random.hpp"

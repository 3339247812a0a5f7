#pragma once

#include "trit.hpp"
#include "circuit.hpp"
#include "machine.hpp"
#include "universal.hpp"
#include "problems.hpp"

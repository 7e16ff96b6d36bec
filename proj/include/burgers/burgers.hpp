#pragma once

#include "burgers/common.hpp"
#include "burgers/forcing.hpp"
#include "burgers/minimizer.hpp"
#include "burgers/oracle.hpp"
#include "burgers/path.hpp"
#include "burgers/render.hpp"
#include "burgers/scenario.hpp"
#include "burgers/shock.hpp"
#include "burgers/sweep.hpp"

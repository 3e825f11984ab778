#pragma once

#include "depthtwo/field.hpp"
#include "depthtwo/linalg.hpp"
#include "depthtwo/algebra.hpp"
#include "depthtwo/bimodule.hpp"
#include "depthtwo/tensor.hpp"
#include "depthtwo/depth.hpp"
#include "depthtwo/constructions.hpp"
#include "depthtwo/hochschild.hpp"
#include "depthtwo/cocore.hpp"
#include "depthtwo/json_io.hpp"

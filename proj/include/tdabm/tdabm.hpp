#pragma once

#include "tdabm/cover.hpp"
#include "tdabm/error.hpp"
#include "tdabm/export.hpp"
#include "tdabm/graph.hpp"
#include "tdabm/ingest.hpp"
#include "tdabm/io.hpp"
#include "tdabm/layout.hpp"
#include "tdabm/point_cloud.hpp"
#include "tdabm/render.hpp"

// Copyright 2026 The shiftspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* Compiled as C: the public header must stay valid C. */

#include <stdio.h>
#include <string.h>

#include "shiftspec/shiftspec.h"

int main(void) {
  const char* doc =
      "{\"weights\": {\"tail\": {\"kind\": \"constant\", \"value\": 2}},"
      " \"map\": {\"kind\": \"poly\", \"coeffs\": [0, 1]}}";
  shiftspec_instance* inst = NULL;
  shiftspec_decision d = SHIFTSPEC_UNDECIDED;
  char* json = NULL;
  if (shiftspec_instance_parse(doc, &inst) != SHIFTSPEC_OK) {
    fprintf(stderr, "parse failed: %s\n", shiftspec_last_error());
    return 1;
  }
  if (shiftspec_decide(inst, SHIFTSPEC_ROUTE_GEOMETRIC, &d, &json) != SHIFTSPEC_OK || d != SHIFTSPEC_JCLASS) {
    fprintf(stderr, "decide failed: %s\n", shiftspec_last_error());
    shiftspec_instance_free(inst);
    return 1;
  }
  if (strstr(json, "JCLASS") == NULL) {
    shiftspec_string_free(json);
    shiftspec_instance_free(inst);
    return 1;
  }
  shiftspec_string_free(json);
  shiftspec_instance_free(inst);
  puts("ok");
  return 0;
}

"""Sierpoly Conventions

Path constants, file names and default budgets shared by the library and
the CLI. Most values are fixed conventions. CACHE_DIR can be overridden via
the SIERPOLY_CACHE environment variable (or the --cache-dir flag).
"""

import os

# --- Cache ---
# Override with SIERPOLY_CACHE env var.
CACHE_DIR = os.environ.get("SIERPOLY_CACHE", "~/.cache/sierpoly")
CACHE_SUFFIX = ".json"

# --- Reports ---
SCHEMA_VERSION = 1

# --- Parameter files ---
PARAMS_FILENAME = "sierpoly.yaml"

# --- Census plots ---
PROFILES_SVG = "profiles.svg"
PROFILES_CSV = "profiles.csv"
DEFECTS_CSV = "defects.csv"

# --- Budgets ---
MATERIALIZE_LIMIT = 1_000_000  # addresses r**k above which levels stay implicit
MAX_LEVEL = 12  # deepest level tried by the stabilization search
PROBE_WINDOW = 2
PROFILE_WINDOW = 2
ISOMETRY_STEP_BUDGET = 2_000_000
MAX_COUNTEREXAMPLES = 20

# --- Letters ---
# Addresses use bare digits up to this alphabet size, comma lists above it.
DIGIT_ALPHABET_MAX = 10

# --- Export formats ---
EXPORT_FORMATS = ("edgelist", "dot", "graphml", "json")

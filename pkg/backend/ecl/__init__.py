from ecl.closure import EclNumber, ecl_add, ecl_exp, ecl_inv, ecl_log, ecl_mul, ecl_neg, ecl_sub, from_system
from ecl.enumerate import enumerate_systems
from ecl.catalog import Catalog, CatalogEntry, catalog, catalog_lines

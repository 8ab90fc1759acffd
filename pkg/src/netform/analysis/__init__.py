from .stability import converged, first_stable_period, is_stable, unstable_pairs
from .reach import (BudgetExceeded, ReachabilitySets, lemma3_check, max_stable_welfare,
                    reachable_sets, sampled_welfare_bound, theorem1_check)
from .compare import DifferenceClass, difference_class
from .paths import (ConstructionRefused, both_modes_report, path_lemma2, path_prop2_line, path_prop2_star,
                    path_prop3_insert, path_prop4, path_theorem2, prop3_report, prop4_recursion, prop4_report)

"""
Commutants on a window
======================

Primality is read from the dimension of the windowed commutant.
"""

# %%
from ccrflow.cone import Cone
from ccrflow.isometric import DirectSumRep, ModuleRep, PModule, Window, intertwiner_space, is_prime

half = ModuleRep.half_line(1.0)
print("half-line commutant", intertwiner_space(half, half, Window.square(4, 1)).dim)

two = ModuleRep.half_line(1.0, multiplicity=2)
print("multiplicity two", intertwiner_space(two, two, Window.square(4, 1)).dim)

A1 = ModuleRep(PModule(Cone.orthant(2), [[0, 0]]))
A2 = ModuleRep(PModule(Cone.orthant(2), [[0, 0], [-1, 0]]))
print("non-translate modules", intertwiner_space(A1, A2, Window((-1, 0), (3, 4))).dim)

# %%
w = Window.square(5, 2)
print("quarter plane prime:", is_prime(ModuleRep.quarter_plane(1.0), w))
print("quarter plane k=2 prime:", is_prime(ModuleRep.quarter_plane(1.0, 2), w))
print("direct sum prime:", is_prime(DirectSumRep(half, half), Window.square(5, 1)))

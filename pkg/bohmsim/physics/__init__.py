"""Physics of the two-photon system: packets, both velocity routes, boosts, metric and paraxial limit."""

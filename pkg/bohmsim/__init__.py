"""
bohmsim: relativistic two-photon Bohmian velocity fields and trajectories.

Two independent routes to the same velocity field are provided: the operational
weak-value model (`bohmsim.physics.weak_value`) and the multitime Klein-Gordon
currents (`bohmsim.physics.kg_dynamics`).
"""
__version__ = "0.1.0"

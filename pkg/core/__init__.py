"""
infoplan core library: world, belief, dynamics, MPC, planners and simulation.
"""

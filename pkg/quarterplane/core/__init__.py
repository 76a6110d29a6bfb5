"""
Quarterplane Core
Systems, machines, codes and field polynomials
"""

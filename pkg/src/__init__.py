"""
toricw - toric domains and Gromov widths of disk cotangent bundles

Biblioteka numeryczna i CLI: profile toryczne, szerokości Gromova i pojemności ECH
dla sfer obrotowych, w szczególności sferoid E(1,1,c).
"""

__version__ = "0.3.0"
__author__ = "toricw contributors"
__description__ = "Toric profiles, Gromov widths and ECH capacities of spheres of revolution"
__license__ = "MIT"

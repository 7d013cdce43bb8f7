"""Variety catalog, branch arrangement, equisingular deformations and the K3 pencil"""

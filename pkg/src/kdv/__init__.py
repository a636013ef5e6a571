"""Numerical core of the saturated-feedback KdV simulator"""

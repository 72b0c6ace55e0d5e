"""Test suite for ESCS"""

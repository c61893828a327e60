"""Test suite for the network kriging toolkit."""

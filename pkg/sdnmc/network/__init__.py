"""SDN components encoded as actors."""

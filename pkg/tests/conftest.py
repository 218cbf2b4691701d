from reachgame.model import HandState, JointId, SkeletonFrame, Vec3

# One line per end-to-end check, printed after the run; the terminal
# reporter bypasses output capture.
VERDICTS = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if VERDICTS:
        terminalreporter.section("verdicts")
        for line in VERDICTS:
            terminalreporter.write_line(line)


def make_frame(ts_us, hand, state=HandState.OPEN, tracked=True, joints=None):
    """Single-joint frame helper; most tests only need the hand."""
    allj = {JointId.HAND_RIGHT: hand}
    if joints:
        allj.update(joints)
    return SkeletonFrame(
        timestamp_us=ts_us, joints=allj, right_hand_state=state, tracked=tracked
    )

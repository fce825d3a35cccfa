from notes import summarize


def test_summarize_strips():
    assert summarize([" a ", "", "b"]) == "a; b"


def test_summarize_empty():
    assert summarize([]) == ""


if __name__ == "__main__":
    test_summarize_strips()
    test_summarize_empty()
    print("ok")

import org.junit.jupiter.api.Test;
import static org.junit.jupiter.api.Assertions.assertEquals;

class Junit5StyleTest {
    @Test
    void additionWorks() {
        assertEquals(4, 2 + 2);
    }

    @Test
    void testNamedPrefix() {
        assertEquals(0, 2 - 2);
    }
}

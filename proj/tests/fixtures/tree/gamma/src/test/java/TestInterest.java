import org.junit.Test;
import static org.junit.Assert.assertEquals;

public class TestInterest {
    @Test
    public void testSimple() {
        assertEquals(100, Interest.simple(10000, 100, 1));
    }

    @Test
    public void testSimpleZeroYears() {
        assertEquals(0, Interest.simple(10000, 100, 0));
    }
}

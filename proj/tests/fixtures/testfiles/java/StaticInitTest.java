import org.junit.Test;
import static org.junit.Assert.assertEquals;

public class StaticInitTest {
    private static final int[] TABLE = {1, 2, 3};
    static {
        TABLE[0] = 9;
    }

    @Test
    public void testTable() {
        assertEquals(9, TABLE[0]);
    }

    @Test
    public void testTableLength() {
        assertEquals(3, TABLE.length);
    }
}
